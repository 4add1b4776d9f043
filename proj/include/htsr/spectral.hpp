#pragma once

#include "htsr/tensor_io.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace htsr {

/// Ascending eigenvalues of X = W^T W / N together with the layer shape.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::int64_t N = 0;
  std::int64_t M = 0;
  double Q = 1.0;
  std::string source_name;
  Normalization normalization = Normalization::kNone;

  double lambda_max() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  /// Strictly positive eigenvalues, ascending.
  std::vector<double> positive() const;
  /// Smallest strictly positive eigenvalue, 0 if none.
  double lambda_min_positive() const;
  /// Eigenvalues at or below the numerical-rank tolerance.
  std::int64_t zero_count() const;
};

/// Builds a Spectrum from raw eigenvalues: sorts, clamps noise in
/// [-1e-12, 0) to zero and rejects anything more negative.
Spectrum make_spectrum(std::vector<double> eigenvalues, std::int64_t N, std::int64_t M,
                       std::string source_name = {},
                       Normalization normalization = Normalization::kNone);

/// Squared singular values of W divided by N.
Spectrum eigenspectrum(const WeightMatrix& w);

/// Same spectrum with every eigenvalue multiplied by c (c > 0).
Spectrum scaled(const Spectrum& s, double c, Normalization tag);

/// The trace-m rescaling applied at the spectrum level (mean eigenvalue 1).
Spectrum normalize_trace_m(const Spectrum& s);

struct LogHistogram {
  std::vector<double> bin_edges;  // ln(lambda), strictly increasing
  std::vector<double> densities;  // count / (M * width)
  double total_mass = 0.0;        // fraction of eigenvalues that landed in a bin
  std::int64_t zero_count = 0;    // eigenvalues excluded for being zero
  std::int64_t below_lower = 0;   // positive eigenvalues excluded by `lower`

  std::size_t bins() const { return densities.size(); }
  double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
  /// Probability mass per bin (density * width).
  std::vector<double> masses() const;
};

/// Equal-width bins in ln(lambda). Bins are half-open [a, b) except the last,
/// which is closed.
LogHistogram log_histogram(const Spectrum& s, int bins,
                           std::optional<double> lower = std::nullopt);

/// Histogram of the positive eigenvalues on a fixed ln-space grid.
LogHistogram log_histogram_on_grid(const Spectrum& s, std::span<const double> ln_edges);

/// Base-2 Jensen-Shannon divergence in [0, 1]. Histograms on different grids
/// are rebinned by overlap onto a shared grid spanning both ranges.
double jensen_shannon(const LogHistogram& a, const LogHistogram& b);

/// JSD of two spectra binned directly on `bins` shared ln-space bins.
double jensen_shannon(const Spectrum& a, const Spectrum& b, int bins = 100);

}  // namespace htsr
