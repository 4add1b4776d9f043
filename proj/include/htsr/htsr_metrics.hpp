#pragma once

// Shape and scale layer metrics and their layer averages.

#include "htsr/plfit.hpp"
#include "htsr/tensor_io.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace htsr {

struct LayerMetrics {
  std::optional<double> alpha;
  std::optional<double> log_spectral_norm;  // log10 lambda_max
  std::optional<double> alpha_hat;
  std::optional<double> d_ks;
  std::optional<double> rand_distance;
  UniversalityClass universality = UniversalityClass::kRandomLike;
};

/// alpha * log10(lambda_max).
double alpha_hat(double alpha, double lambda_max);

/// log10(lambda_max). Throws kDomain when lambda_max <= 0.
double log_spectral_norm(double lambda_max);

/// JSD on 100 shared log bins between the ESD of w and that of its
/// element-wise permutation.
double rand_distance(const WeightMatrix& w, std::uint64_t seed);

enum class AverageMode { kMean, kLogProductMean };

std::string_view to_string(AverageMode mode);

/// Arithmetic mean, or the mean of log10 values.
double model_average(std::span<const double> per_layer, AverageMode mode);

/// Layers smaller than this are left out of model averages.
inline constexpr std::int64_t kMinAveragedM = 8;

}  // namespace htsr
