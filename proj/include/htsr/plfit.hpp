#pragma once

// Continuous power-law tail fits with xmin chosen by KS minimization.

#include "htsr/spectral.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace htsr {

struct ScanPoint {
  double xmin = 0.0;
  double alpha = 0.0;
  double d_ks = 0.0;
};

struct PowerLawFit {
  double alpha = 0.0;
  double xmin = 0.0;
  double xmax = 0.0;
  double d_ks = 1.0;
  std::int64_t tail_count = 0;
  std::vector<ScanPoint> scan;  // ascending xmin
  Normalization normalization = Normalization::kNone;
};

struct FitOptions {
  std::int64_t min_eigenvalues = 8;  // positive eigenvalues required to fit
  std::int64_t min_tail = 3;
};

/// alpha = 1 + n / sum(ln(x_i / xmin)).
double mle_alpha(std::span<const double> tail, double xmin);

/// KS distance between the sorted tail and F(x) = 1 - (x / xmin)^(1 - alpha).
double ks_distance(std::span<const double> sorted_tail, double alpha, double xmin);

/// Scans every distinct positive eigenvalue leaving at least min_tail
/// eigenvalues in the tail. Minimum D_KS wins; ties go to the larger xmin.
PowerLawFit fit_pl(const Spectrum& s, const FitOptions& options = {});

/// Fits with d_ks above this are reported as poor fits.
inline constexpr double kPoorFitDks = 0.1;

bool is_good_fit(const PowerLawFit& fit);

enum class UniversalityClass {
  kRandomLike,
  kBulkPlusSpikes,
  kWeaklyHeavyTailed,
  kFatTailed,
  kVeryHeavyTailed,
  kRankCollapse,
};

std::string_view to_string(UniversalityClass c);

/// Number of eigenvalues above lambda_plus + Delta_TW of the MP law whose
/// variance is the spectrum's mean eigenvalue.
std::int64_t count_above_mp_edge(const Spectrum& s);

/// Rank collapse (Q > 1 and more than 10% zero eigenvalues) first, then
/// RandomLike when nothing sits above the MP edge, then the alpha ranges when
/// the fit is good, BulkPlusSpikes otherwise.
UniversalityClass classify(double alpha, bool fit_ok, const Spectrum& s);

}  // namespace htsr
