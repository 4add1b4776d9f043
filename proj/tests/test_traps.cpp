#include "doctest.h"

#include "htsr/error.hpp"
#include "htsr/rmt_models.hpp"
#include "htsr/traps.hpp"

#include <cmath>

using namespace htsr;

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t first, int n) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < n; ++i) s.push_back(first + static_cast<std::uint64_t>(i));
  return s;
}

}  // namespace

TEST_CASE("pure Gaussian: no trap across randomization seeds") {
  const WeightMatrix w = sample_gaussian(500, 500, 0.1, 2024);
  const TrapReport r = detect_traps(w, seed_range(0, 100));
  CHECK(r.num_seeds == 100);
  CHECK(r.detection_fraction <= 0.05);
  CHECK_FALSE(r.has_trap);
  CHECK(r.sigma2_hat == doctest::Approx(0.01).epsilon(0.02));
  CHECK(r.lambda_plus == doctest::Approx(4.0 * r.sigma2_hat));
  CHECK(r.delta_tw == doctest::Approx(r.lambda_plus * std::pow(500.0, -2.0 / 3.0)));
  CHECK_FALSE(r.heavy_tail_caveat);
}

TEST_CASE("planted single large entry is a trap") {
  WeightMatrix w = sample_gaussian(200, 200, 0.1, 8);
  w.values(17, 42) = 5.0;
  const TrapReport r = detect_traps(w, seed_range(1, 10));
  CHECK(r.sigma2_hat == doctest::Approx(0.010625).epsilon(0.03));
  CHECK(r.lambda_plus == doctest::Approx(0.0425).epsilon(0.03));
  CHECK(r.has_trap);
  CHECK(r.detection_fraction == 1.0);
  REQUIRE_FALSE(r.trap_eigenvalues.empty());
  CHECK(r.trap_eigenvalues.front() == doctest::Approx((25.0 + 200 * 0.01) / 200).epsilon(0.1));
  for (double v : r.trap_eigenvalues) CHECK(v > r.lambda_plus + r.delta_tw);

  // The outcome does not depend on which permutations are drawn.
  for (std::uint64_t base : {100u, 5000u, 77777u}) CHECK(detect_traps(w, seed_range(base, 3)).has_trap);
}

TEST_CASE("sensitivity and specificity over matrix seeds") {
  int detected = 0, false_positive = 0;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    WeightMatrix g = sample_gaussian(200, 200, 0.1, 300 + static_cast<std::uint64_t>(i));
    false_positive += detect_traps(g, seed_range(9, 1)).has_trap;
    // Spike ~ x^2 / N: choose x so the spike is twice the threshold.
    const double threshold = 0.04 * (1 + std::pow(200.0, -2.0 / 3.0));
    g.values(3, 4) = std::sqrt(2 * threshold * 200);
    detected += detect_traps(g, seed_range(9, 1)).has_trap;
  }
  CHECK(detected >= 19);
  CHECK(false_positive <= 1);
}

TEST_CASE("heavy-tailed elements raise the caveat flag when the randomized fit is heavy") {
  const WeightMatrix p = sample_pareto(300, 300, 1.0, 1.0, 5);
  const TrapReport r = detect_traps(p, seed_range(0, 2));
  CHECK(r.randomized_alpha > 1.0);
  CHECK(r.heavy_tail_caveat == (r.randomized_alpha < kHeavyTailCaveatAlpha));
  CHECK(r.heavy_tail_caveat);
  const TrapReport r3 = detect_traps(sample_pareto(300, 300, 3.0, 1.0, 5), seed_range(0, 2));
  CHECK(r3.heavy_tail_caveat == (r3.randomized_alpha < kHeavyTailCaveatAlpha));
}

TEST_CASE("trap detection edge cases") {
  CHECK_THROWS_AS(detect_traps(orient(Matrix::Zero(10, 10)), seed_range(0, 1)), Error);
  CHECK_THROWS_AS(detect_traps(sample_gaussian(10, 10, 1.0, 0), {}), Error);
  const WeightMatrix w = sample_gaussian(80, 60, 1.0, 1);
  const auto seeds = trap_seeds(4, 6);
  const TrapReport a = detect_traps(w, seeds, 1);
  const TrapReport b = detect_traps(w, seeds, 3);
  CHECK(a.detection_fraction == b.detection_fraction);
  CHECK(a.trap_eigenvalues == b.trap_eigenvalues);
  CHECK(a.randomized_alpha == b.randomized_alpha);
}
