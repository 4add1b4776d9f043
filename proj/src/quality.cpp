#include "htsr/quality.hpp"

#include "htsr/error.hpp"
#include "htsr/free_probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace htsr {
namespace {

void finish(QualityReport& r) {
  if (r.q2 > 0.0 && std::isfinite(r.q2)) {
    r.log_q = 0.5 * std::log10(r.q2);
  } else {
    r.log_q.reset();
    r.warnings.emplace_back("quality-nonpositive");
  }
}

}  // namespace

QualityReport q2_discrete(std::span<const double> tail) {
  QualityReport r;
  r.model_id = "discrete";
  r.tail_size = static_cast<std::int64_t>(tail.size());
  if (tail.empty()) {
    r.warnings.emplace_back("quality-empty-tail");
    return r;
  }
  const double sum = std::accumulate(tail.begin(), tail.end(), 0.0);
  r.lambda_min_ecs = *std::min_element(tail.begin(), tail.end());
  // G(lambda) = sum * lambda per eigenvalue with the lower limit at 0; the
  // per-eigen terms then add up to sum^2.
  for (double v : tail) r.per_eigen_g.push_back(sum * v);
  r.q2 = sum * sum;
  finish(r);
  return r;
}

QualityReport q2_free_cauchy(std::span<const double> tail, double alpha) {
  if (tail.empty()) fail(ErrorCode::kDomain, "free Cauchy quality needs a tail");
  const double lambda_max = *std::max_element(tail.begin(), tail.end());
  if (!(lambda_max > 0.0)) fail(ErrorCode::kDomain, "free Cauchy quality needs lambda_max > 0");
  QualityReport r;
  r.model_id = "fc";
  r.tail_size = static_cast<std::int64_t>(tail.size());
  r.alpha = alpha;
  r.q2 = lambda_max * lambda_max;
  r.per_eigen_g.push_back(r.q2);
  finish(r);
  return r;
}

QualityReport q2_imp(double kappa, std::span<const double> tail, double lambda_min_ecs) {
  if (!(lambda_min_ecs > 0.0)) fail(ErrorCode::kDomain, "IMP quality needs lambda_min_ecs > 0");
  const RTransformModel model = InverseMpModel{kappa};
  validate(model);
  QualityReport r;
  r.model_id = "imp";
  r.tail_size = static_cast<std::int64_t>(tail.size());
  r.lambda_min_ecs = lambda_min_ecs;
  r.alpha = 2.0 * kappa;
  for (double v : tail) {
    if (v < lambda_min_ecs) fail(ErrorCode::kDomain, "tail eigenvalue below lambda_min_ecs");
    r.per_eigen_g.push_back(kappa * (std::log(v) - std::log(lambda_min_ecs)));
  }
  r.q2 = std::accumulate(r.per_eigen_g.begin(), r.per_eigen_g.end(), 0.0);
  finish(r);
  return r;
}

QualityReport q2_levy_wigner(double alpha, double lambda_max) {
  if (!(alpha > 1.0 && alpha <= 2.0)) fail(ErrorCode::kDomain, "Levy-Wigner quality needs alpha in (1, 2]");
  if (!(lambda_max > 0.0)) fail(ErrorCode::kDomain, "Levy-Wigner quality needs lambda_max > 0");
  QualityReport r;
  r.model_id = "lw";
  r.tail_size = 1;
  r.alpha = alpha;
  r.q2 = std::pow(10.0, (alpha - 1.0) * std::log10(lambda_max));
  r.per_eigen_g.push_back(r.q2);
  finish(r);
  return r;
}

QualityReport q2_cumulant_series(std::span<const double> tail, std::int64_t m_tilde,
                                 const CumulantSeriesOptions& options) {
  if (tail.empty()) fail(ErrorCode::kDomain, "cumulant quality needs a tail");
  return q2_cumulant_series(tail, cumulants_of(tail), m_tilde, options);
}

QualityReport q2_cumulant_series(std::span<const double> tail, const CumulantSet& c,
                                 std::int64_t m_tilde, const CumulantSeriesOptions& options) {
  if (tail.empty()) fail(ErrorCode::kDomain, "cumulant quality needs a tail");
  if (options.scale_by_tail_size && m_tilde < 1) fail(ErrorCode::kDomain, "m_tilde must be >= 1");
  const double scale = options.scale_by_tail_size ? static_cast<double>(m_tilde) : 1.0;
  QualityReport r;
  r.model_id = "cumulant";
  r.tail_size = static_cast<std::int64_t>(tail.size());
  r.lambda_min_ecs = *std::min_element(tail.begin(), tail.end());
  for (double v : tail) {
    const double x = v / scale;
    double g = 0.0;
    double xk = x;
    for (std::size_t k = 0; k < c.kappa.size(); ++k) {
      g += c.kappa[k] / static_cast<double>(k + 1) * xk;
      xk *= x;
    }
    r.per_eigen_g.push_back(g);
  }
  r.q2 = std::accumulate(r.per_eigen_g.begin(), r.per_eigen_g.end(), 0.0);
  finish(r);
  return r;
}

}  // namespace htsr
