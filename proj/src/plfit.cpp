#include "htsr/plfit.hpp"

#include "htsr/error.hpp"
#include "htsr/rmt_models.hpp"

#include <algorithm>
#include <cmath>

namespace htsr {

double mle_alpha(std::span<const double> tail, double xmin) {
  if (tail.empty()) fail(ErrorCode::kDomain, "mle_alpha needs a non-empty tail");
  if (!(xmin > 0.0)) fail(ErrorCode::kDomain, "mle_alpha needs xmin > 0");
  double log_sum = 0.0;
  for (double x : tail) {
    if (x < xmin) fail(ErrorCode::kDomain, "tail value below xmin");
    log_sum += std::log(x / xmin);
  }
  if (!(log_sum > 0.0)) fail(ErrorCode::kInfiniteAlpha, "every tail value equals xmin");
  return 1.0 + static_cast<double>(tail.size()) / log_sum;
}

double ks_distance(std::span<const double> sorted_tail, double alpha, double xmin) {
  if (!(alpha > 1.0)) fail(ErrorCode::kDomain, "ks_distance needs alpha > 1");
  if (!(xmin > 0.0)) fail(ErrorCode::kDomain, "ks_distance needs xmin > 0");
  if (sorted_tail.empty()) fail(ErrorCode::kDomain, "ks_distance needs a non-empty tail");
  const double n = static_cast<double>(sorted_tail.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_tail.size(); ++i) {
    const double x = sorted_tail[i];
    if (x < xmin) fail(ErrorCode::kDomain, "tail value below xmin");
    const double cdf = 1.0 - std::pow(x / xmin, 1.0 - alpha);
    const double upper = static_cast<double>(i + 1) / n;
    const double lower = static_cast<double>(i) / n;
    d = std::max({d, std::abs(upper - cdf), std::abs(lower - cdf)});
  }
  return d;
}

PowerLawFit fit_pl(const Spectrum& s, const FitOptions& options) {
  const std::vector<double> pos = s.positive();
  const auto n = static_cast<std::int64_t>(pos.size());
  if (n < options.min_eigenvalues) {
    fail(ErrorCode::kTooFewEigenvalues,
         "'" + s.source_name + "' has " + std::to_string(n) + " positive eigenvalues, need " +
             std::to_string(options.min_eigenvalues));
  }
  const std::span<const double> all(pos);
  PowerLawFit fit;
  fit.normalization = s.normalization;
  fit.xmax = pos.back();
  std::size_t best = pos.size();
  for (std::int64_t i = 0; i + options.min_tail <= n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (ui > 0 && pos[ui] == pos[ui - 1]) continue;
    const auto tail = all.subspan(ui);
    const double xmin = pos[ui];
    if (tail.back() == xmin) continue;  // all equal: alpha is infinite
    const double alpha = mle_alpha(tail, xmin);
    const double d = ks_distance(tail, alpha, xmin);
    fit.scan.push_back({xmin, alpha, d});
    if (best == pos.size() || d <= fit.d_ks) {
      best = ui;
      fit.d_ks = d;
      fit.alpha = alpha;
      fit.xmin = xmin;
    }
  }
  if (best == pos.size()) {
    fail(ErrorCode::kDegenerateSpectrum, "'" + s.source_name + "' has no usable tail candidate");
  }
  fit.tail_count = n - static_cast<std::int64_t>(best);
  return fit;
}

bool is_good_fit(const PowerLawFit& fit) { return fit.d_ks <= kPoorFitDks; }

std::string_view to_string(UniversalityClass c) {
  switch (c) {
    case UniversalityClass::kRandomLike: return "RandomLike";
    case UniversalityClass::kBulkPlusSpikes: return "BulkPlusSpikes";
    case UniversalityClass::kWeaklyHeavyTailed: return "WeaklyHeavyTailed";
    case UniversalityClass::kFatTailed: return "FatTailed";
    case UniversalityClass::kVeryHeavyTailed: return "VeryHeavyTailed";
    case UniversalityClass::kRankCollapse: return "RankCollapse";
  }
  return "unknown";
}

std::int64_t count_above_mp_edge(const Spectrum& s) {
  if (s.eigenvalues.empty() || s.M < 2) return 0;
  double sum = 0.0;
  for (double v : s.eigenvalues) sum += v;
  const double sigma2 = sum / static_cast<double>(s.eigenvalues.size());
  if (!(sigma2 > 0.0)) return 0;
  const MpLaw law = mp_law(sigma2, std::max(1.0, s.Q));
  const double threshold = law.lambda_plus + tw_fluctuation(law, s.M);
  return std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                       [threshold](double v) { return v > threshold; });
}

UniversalityClass classify(double alpha, bool fit_ok, const Spectrum& s) {
  const double total = static_cast<double>(s.eigenvalues.size());
  if (s.Q > 1.0 && total > 0.0 && static_cast<double>(s.zero_count()) > 0.1 * total) {
    return UniversalityClass::kRankCollapse;
  }
  if (count_above_mp_edge(s) == 0) return UniversalityClass::kRandomLike;
  if (fit_ok) {
    if (alpha > 6.0) return UniversalityClass::kWeaklyHeavyTailed;
    if (alpha > 2.0) return UniversalityClass::kFatTailed;
    return UniversalityClass::kVeryHeavyTailed;
  }
  return UniversalityClass::kBulkPlusSpikes;
}

}  // namespace htsr
