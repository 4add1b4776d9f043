#include "htsr/htsr_metrics.hpp"

#include "htsr/error.hpp"
#include "htsr/rmt_models.hpp"
#include "htsr/spectral.hpp"

#include <cmath>

namespace htsr {

double log_spectral_norm(double lambda_max) {
  if (!(lambda_max > 0.0)) fail(ErrorCode::kDomain, "log spectral norm needs lambda_max > 0");
  return std::log10(lambda_max);
}

double alpha_hat(double alpha, double lambda_max) {
  return alpha * log_spectral_norm(lambda_max);
}

double rand_distance(const WeightMatrix& w, std::uint64_t seed) {
  const Spectrum original = eigenspectrum(w);
  const Spectrum randomized = eigenspectrum(randomize_elementwise(w, seed));
  return jensen_shannon(original, randomized, 100);
}

std::string_view to_string(AverageMode mode) {
  return mode == AverageMode::kMean ? "mean" : "log-product-mean";
}

double model_average(std::span<const double> per_layer, AverageMode mode) {
  if (per_layer.empty()) fail(ErrorCode::kDomain, "model average of no layers");
  double sum = 0.0;
  for (double v : per_layer) {
    if (mode == AverageMode::kMean) {
      sum += v;
    } else {
      if (!(v > 0.0)) fail(ErrorCode::kDomain, "log-product-mean needs positive values");
      sum += std::log10(v);
    }
  }
  return sum / static_cast<double>(per_layer.size());
}

}  // namespace htsr
