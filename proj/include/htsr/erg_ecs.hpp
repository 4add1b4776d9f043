#pragma once

// The trace-log (det X = 1) tail condition and Effective Correlation Space
// truncation.

#include "htsr/plfit.hpp"
#include "htsr/spectral.hpp"
#include "htsr/tensor_io.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace htsr {

struct CurvePoint {
  double lambda = 0.0;          // k-th largest eigenvalue
  double cumulative_log = 0.0;  // sum of ln over the top k
};

struct ErgResult {
  double lambda_min_detx = 0.0;
  double residual = 0.0;  // |sum ln lambda| over the selected tail, nats
  std::int64_t tail_count = 0;
  std::vector<CurvePoint> curve;  // k = 1..M', descending lambda
  bool crossed = false;           // cumulative sum takes both signs
  Normalization normalization = Normalization::kNone;
};

struct EcsGap {
  double delta_lambda_min = 0.0;
};

/// Sum of ln(lambda). Throws kDomain on any lambda <= 0.
double trace_log(std::span<const double> tail);

struct DetxOptions {
  bool require_trace_m = false;  // refuse spectra not tagged trace-m
};

/// Picks the top-k tail minimizing |sum ln lambda| over the positive
/// eigenvalues; ties go to the larger k.
ErgResult detx_lambda_min(const Spectrum& s, const DetxOptions& options = {});

/// lambda_min^PL - lambda_min^detX. Throws kContract when the two were
/// computed under different normalizations.
EcsGap delta_lambda_min(const PowerLawFit& fit, const ErgResult& erg);

/// Truncated-SVD reconstruction keeping the components with
/// sigma^2 / N >= lambda_min.
WeightMatrix ecs_project(const WeightMatrix& w, double lambda_min);

}  // namespace htsr
