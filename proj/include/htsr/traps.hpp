#pragma once

// Correlation traps: spikes that survive element-wise randomization.

#include "htsr/tensor_io.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace htsr {

struct TrapReport {
  double sigma2_hat = 0.0;  // raw second moment of the entries
  double lambda_plus = 0.0;
  double delta_tw = 0.0;
  std::vector<double> trap_eigenvalues;  // from the first seed, descending
  bool has_trap = false;
  std::int64_t num_seeds = 0;
  double detection_fraction = 0.0;
  // The randomized spectrum is itself heavy tailed (fitted alpha < 4), so
  // the MP null behind the threshold is unreliable.
  bool heavy_tail_caveat = false;
  double randomized_alpha = 0.0;  // 0 when the fit was refused
};

inline constexpr double kHeavyTailCaveatAlpha = 4.0;

/// Randomizes w once per seed, thresholds the randomized spectrum at
/// lambda_plus + Delta_TW of mp_law(sigma2_hat, Q) and aggregates. Seeds run
/// on up to `threads` workers; the result does not depend on the schedule.
TrapReport detect_traps(const WeightMatrix& w, std::span<const std::uint64_t> seeds,
                        unsigned threads = 1);

/// Seeds derive_seed(base, 0..count-1).
std::vector<std::uint64_t> trap_seeds(std::uint64_t base, int count);

}  // namespace htsr
