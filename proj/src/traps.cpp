#include "htsr/traps.hpp"

#include "htsr/error.hpp"
#include "htsr/plfit.hpp"
#include "htsr/rmt_models.hpp"
#include "htsr/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace htsr {

std::vector<std::uint64_t> trap_seeds(std::uint64_t base, int count) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(derive_seed(base, static_cast<std::uint64_t>(i)));
  return seeds;
}

TrapReport detect_traps(const WeightMatrix& w, std::span<const std::uint64_t> seeds,
                        unsigned threads) {
  if (seeds.empty()) fail(ErrorCode::kDomain, "detect_traps needs at least one seed");
  const WeightMatrix oriented = orient(w);
  const double n = static_cast<double>(oriented.n_rows());
  const double m = static_cast<double>(oriented.n_cols());
  const double sum_sq = oriented.values.squaredNorm();
  if (sum_sq == 0.0) fail(ErrorCode::kDegenerateMatrix, oriented.name + " is all zeros");

  TrapReport r;
  r.sigma2_hat = sum_sq / (n * m);
  const MpLaw law = mp_law(r.sigma2_hat, n / m);
  r.lambda_plus = law.lambda_plus;
  r.delta_tw = tw_fluctuation(law, oriented.n_cols());
  const double threshold = r.lambda_plus + r.delta_tw;
  r.num_seeds = static_cast<std::int64_t>(seeds.size());

  // Each slot is written by exactly one worker.
  std::vector<std::vector<double>> exceed(seeds.size());
  std::vector<Spectrum> first(1);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      Spectrum s = eigenspectrum(randomize_elementwise(oriented, seeds[i]));
      for (auto it = s.eigenvalues.rbegin(); it != s.eigenvalues.rend() && *it > threshold; ++it) {
        exceed[i].push_back(*it);
      }
      if (i == 0) first[0] = std::move(s);
    }
  };
  const unsigned pool = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(seeds.size()));
  std::vector<std::jthread> workers;
  for (unsigned t = 1; t < pool; ++t) workers.emplace_back(work);
  work();
  workers.clear();

  std::size_t hits = 0;
  for (const auto& e : exceed) hits += e.empty() ? 0 : 1;
  r.detection_fraction = static_cast<double>(hits) / static_cast<double>(seeds.size());
  r.has_trap = r.detection_fraction >= 0.5;
  r.trap_eigenvalues = exceed[0];

  try {
    const PowerLawFit fit = fit_pl(first[0]);
    r.randomized_alpha = fit.alpha;
    r.heavy_tail_caveat = fit.alpha < kHeavyTailCaveatAlpha;
  } catch (const Error&) {
    // Too few eigenvalues to judge the null; leave the caveat unset.
  }
  return r;
}

}  // namespace htsr
