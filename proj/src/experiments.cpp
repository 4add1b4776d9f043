#include "htsr/experiments.hpp"

#include "htsr/erg_ecs.hpp"
#include "htsr/error.hpp"
#include "htsr/rmt_models.hpp"

namespace htsr {
namespace {

std::optional<PowerLawFit> try_fit(const Spectrum& s) {
  try {
    return fit_pl(s);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTooFewEigenvalues || e.code() == ErrorCode::kDegenerateSpectrum) {
      return std::nullopt;
    }
    throw;
  }
}

void add_detx(AlphaTrial& t, const Spectrum& s) {
  const Spectrum tm = s.normalization == Normalization::kTraceM ? s : normalize_trace_m(s);
  const ErgResult erg = detx_lambda_min(tm);
  t.lambda_min_detx = erg.lambda_min_detx;
  if (const auto fit = try_fit(tm)) t.delta_lambda_min = delta_lambda_min(*fit, erg).delta_lambda_min;
}

}  // namespace

AlphaTrial pareto_alpha_trial(std::int64_t N, std::int64_t M, double mu, std::uint64_t seed,
                              bool with_detx) {
  AlphaTrial t;
  t.parameter = mu;
  t.Q = static_cast<double>(N) / static_cast<double>(M);
  t.seed = seed;
  const Spectrum s = eigenspectrum(sample_pareto(N, M, mu, 1.0, seed));
  t.fit = try_fit(s);
  if (with_detx) add_detx(t, s);
  return t;
}

AlphaTrial imp_alpha_trial(std::int64_t M, double kappa, std::uint64_t seed, bool with_detx) {
  AlphaTrial t;
  t.parameter = kappa;
  t.Q = 2.0 * kappa + 1.0;
  t.seed = seed;
  const Spectrum s = sample_imp_spectrum(M, t.Q, seed);
  t.fit = try_fit(s);
  if (with_detx) add_detx(t, s);
  return t;
}

DetxGapTrial detx_gap_trial(std::int64_t M, std::int64_t tail_size, std::uint64_t seed) {
  const IdealSpectrum ideal = make_ideal_spectrum(M, tail_size, seed);
  const PowerLawFit fit = fit_pl(ideal.spectrum);
  const ErgResult erg = detx_lambda_min(ideal.spectrum);
  const auto& ev = ideal.spectrum.eigenvalues;
  DetxGapTrial t;
  t.seed = seed;
  t.tail_start = ideal.tail_start;
  t.lambda_min_pl = fit.xmin;
  t.lambda_min_detx = erg.lambda_min_detx;
  t.delta_lambda_min = delta_lambda_min(fit, erg).delta_lambda_min;
  t.spacing = ev[ideal.tail_start_index + 1] - ev[ideal.tail_start_index];
  t.alpha = fit.alpha;
  return t;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::kDomain, "slope needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) fail(ErrorCode::kDomain, "slope of a constant x");
  return sxy / sxx;
}

}  // namespace htsr
