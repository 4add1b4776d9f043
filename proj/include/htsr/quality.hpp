#pragma once

// Layer quality Q^2 = sum_i G(lambda_i) over the ECS tail, per R-transform
// model.

#include "htsr/free_probability.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace htsr {

struct QualityReport {
  std::string model_id;  // discrete, fc, imp, lw, cumulant
  double q2 = 0.0;
  std::optional<double> log_q;  // log10 Q; empty when q2 <= 0
  std::int64_t tail_size = 0;
  double lambda_min_ecs = 0.0;
  std::vector<double> per_eigen_g;
  std::optional<double> alpha;  // fitted alpha (fc, lw) or 2 kappa (imp)
  std::vector<std::string> warnings;
};

/// q2 = (sum lambda)^2, log_q = log10(sum lambda).
QualityReport q2_discrete(std::span<const double> tail);

/// q2 = lambda_max^2 with a = 1 and lambda_min taken as 0, so
/// log_q = log10 lambda_max.
QualityReport q2_free_cauchy(std::span<const double> tail, double alpha);

/// q2 = sum kappa ln(lambda_i / lambda_min_ecs).
QualityReport q2_imp(double kappa, std::span<const double> tail, double lambda_min_ecs);

/// log10 q2 = (alpha - 1) log10 lambda_max for alpha in (1, 2].
QualityReport q2_levy_wigner(double alpha, double lambda_max);

struct CumulantSeriesOptions {
  // Divide lambda by the tail size inside the series, as printed. Off means
  // the series is evaluated at lambda itself.
  bool scale_by_tail_size = true;
};

/// q2 = sum_i sum_k (kappa_k / k) x_i^k, x_i = lambda_i / m_tilde, with the
/// cumulants computed from the same tail.
QualityReport q2_cumulant_series(std::span<const double> tail, std::int64_t m_tilde,
                                 const CumulantSeriesOptions& options = {});

/// Same series with caller-supplied cumulants.
QualityReport q2_cumulant_series(std::span<const double> tail, const CumulantSet& cumulants,
                                 std::int64_t m_tilde, const CumulantSeriesOptions& options = {});

}  // namespace htsr
