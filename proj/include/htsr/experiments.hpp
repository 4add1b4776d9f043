#pragma once

// Synthetic sweeps shared by `htsr-diag reproduce` and the acceptance suite.

#include "htsr/plfit.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace htsr {

struct AlphaTrial {
  double parameter = 0.0;  // mu or kappa
  double Q = 1.0;
  std::uint64_t seed = 0;
  std::optional<PowerLawFit> fit;  // empty when the fit was refused
  // Filled when requested: detx and a refit on the trace-m spectrum.
  std::optional<double> lambda_min_detx;
  std::optional<double> delta_lambda_min;
};

/// Fits the ESD of an N x M Pareto(mu, 1) matrix.
AlphaTrial pareto_alpha_trial(std::int64_t N, std::int64_t M, double mu, std::uint64_t seed,
                              bool with_detx = false);

/// Fits an inverse-MP spectrum with kappa = (Q - 1) / 2.
AlphaTrial imp_alpha_trial(std::int64_t M, double kappa, std::uint64_t seed,
                           bool with_detx = false);

struct DetxGapTrial {
  std::uint64_t seed = 0;
  double tail_start = 0.0;
  double lambda_min_pl = 0.0;
  double lambda_min_detx = 0.0;
  double delta_lambda_min = 0.0;
  double spacing = 0.0;  // gap between the two smallest tail eigenvalues
  double alpha = 0.0;
};

/// Default tail size of the constructed ideal spectra.
inline constexpr std::int64_t kIdealTailSize = 100;

/// MP bulk plus a trace-log-zeroed alpha = 2 tail, then fit and detx on it.
DetxGapTrial detx_gap_trial(std::int64_t M, std::int64_t tail_size, std::uint64_t seed);

/// Ordinary least squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace htsr
