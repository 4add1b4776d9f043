#pragma once

// Reference random-matrix laws and seeded samplers.

#include "htsr/spectral.hpp"
#include "htsr/tensor_io.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace htsr {

/// Marchenko-Pastur law for X = W^T W / N with element variance sigma2 and
/// aspect ratio Q = N / M.
struct MpLaw {
  double sigma2 = 1.0;
  double Q = 1.0;
  double lambda_minus = 0.0;
  double lambda_plus = 4.0;
};

MpLaw mp_law(double sigma2, double Q);

/// Continuous MP density, zero outside (lambda_minus, lambda_plus).
double mp_density(const MpLaw& law, double lambda);

/// Tracy-Widom fluctuation scale lambda_plus * M^(-2/3).
double tw_fluctuation(const MpLaw& law, std::int64_t M);

/// splitmix64 step, used to derive independent child seeds from one seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Deterministic generator. Only raw 64-bit engine output is consumed, so
/// draws do not depend on the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct SeededSampler {
  std::uint64_t seed = 0;
  std::string algorithm_id;
};

/// i.i.d. N(0, sigma^2) entries, filled row-major. Requires N >= M >= 2.
WeightMatrix sample_gaussian(std::int64_t N, std::int64_t M, double sigma, std::uint64_t seed);

/// Pareto(mu, x_m) magnitudes, x_m * U^(-1/mu), with Rademacher signs.
WeightMatrix sample_pareto(std::int64_t N, std::int64_t M, double mu, double x_m,
                           std::uint64_t seed);

/// Eigenvalues of X = G^T G / N for an N x M matrix G of i.i.d.
/// N(0, sigma2) entries, drawn from the bidiagonal chi model in O(N M)
/// instead of a dense decomposition. Same distribution as
/// eigenspectrum(sample_gaussian(...)), not the same draw.
Spectrum sample_wishart_spectrum(std::int64_t N, std::int64_t M, double sigma2, std::uint64_t seed);

/// Reciprocal eigenvalues of a Gaussian Wishart spectrum with N = round(Q M),
/// rescaled to mean 1. Tagged trace-m.
Spectrum sample_imp_spectrum(std::int64_t M, double Q, std::uint64_t seed);

/// Uniform random permutation of all N*M entries: Fisher-Yates applied to
/// the sorted entries, written back row-major.
WeightMatrix randomize_elementwise(const WeightMatrix& w, std::uint64_t seed);

/// A Marchenko-Pastur bulk below an alpha = 2 power-law quantile tail whose
/// log-eigenvalues sum to zero.
struct IdealSpectrum {
  Spectrum spectrum;
  std::size_t tail_start_index = 0;  // index of the smallest tail eigenvalue
  double tail_start = 0.0;
};

IdealSpectrum make_ideal_spectrum(std::int64_t M, std::int64_t tail_size, std::uint64_t seed);

}  // namespace htsr
