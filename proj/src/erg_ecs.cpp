#include "htsr/erg_ecs.hpp"

#include "htsr/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace htsr {

double trace_log(std::span<const double> tail) {
  double sum = 0.0;
  for (double v : tail) {
    if (!(v > 0.0)) fail(ErrorCode::kDomain, "trace_log needs positive eigenvalues");
    sum += std::log(v);
  }
  return sum;
}

ErgResult detx_lambda_min(const Spectrum& s, const DetxOptions& options) {
  if (options.require_trace_m && s.normalization != Normalization::kTraceM) {
    fail(ErrorCode::kContract, "detx needs a trace-m normalized spectrum");
  }
  const std::vector<double> pos = s.positive();
  if (pos.empty()) fail(ErrorCode::kDegenerateSpectrum, "no positive eigenvalues for detx");

  ErgResult r;
  r.normalization = s.normalization;
  r.curve.reserve(pos.size());
  double cum = 0.0;
  double best = INFINITY;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t k = 0; k < pos.size(); ++k) {
    const double lambda = pos[pos.size() - 1 - k];
    cum += std::log(lambda);
    r.curve.push_back({lambda, cum});
    lo = std::min(lo, cum);
    hi = std::max(hi, cum);
    if (std::abs(cum) <= best) {
      best = std::abs(cum);
      r.lambda_min_detx = lambda;
      r.tail_count = static_cast<std::int64_t>(k + 1);
    }
  }
  r.residual = best;
  r.crossed = lo <= 0.0 && hi >= 0.0;
  return r;
}

EcsGap delta_lambda_min(const PowerLawFit& fit, const ErgResult& erg) {
  if (fit.normalization != erg.normalization) {
    fail(ErrorCode::kContract, "power-law fit is " + std::string(to_string(fit.normalization)) +
                                   " but detx is " + std::string(to_string(erg.normalization)));
  }
  return {fit.xmin - erg.lambda_min_detx};
}

WeightMatrix ecs_project(const WeightMatrix& w, double lambda_min) {
  if (!(lambda_min > 0.0)) fail(ErrorCode::kDomain, "ecs_project needs lambda_min > 0");
  Eigen::BDCSVD<Matrix> svd(w.values, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (!sv.allFinite()) fail(ErrorCode::kNumeric, "SVD of " + w.name + " is not finite");
  const double n = static_cast<double>(w.n_rows());
  Eigen::Index keep = 0;
  while (keep < sv.size() && sv[keep] * sv[keep] / n >= lambda_min) ++keep;
  if (keep == 0) fail(ErrorCode::kEmptyEcs, "no eigenvalue of " + w.name + " reaches lambda_min");

  WeightMatrix out = w;
  out.values = svd.matrixU().leftCols(keep) * sv.head(keep).asDiagonal() *
               svd.matrixV().leftCols(keep).transpose();
  return out;
}

}  // namespace htsr
