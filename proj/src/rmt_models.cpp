#include "htsr/rmt_models.hpp"

#include "htsr/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace htsr {

MpLaw mp_law(double sigma2, double Q) {
  if (!(sigma2 > 0.0)) fail(ErrorCode::kDomain, "MP law needs sigma2 > 0");
  if (!(Q >= 1.0)) fail(ErrorCode::kDomain, "MP law needs Q >= 1");
  const double r = std::sqrt(1.0 / Q);
  return MpLaw{sigma2, Q, sigma2 * (1.0 - r) * (1.0 - r), sigma2 * (1.0 + r) * (1.0 + r)};
}

double mp_density(const MpLaw& law, double lambda) {
  if (!(lambda > law.lambda_minus) || !(lambda < law.lambda_plus)) return 0.0;
  const double root = std::sqrt((law.lambda_plus - lambda) * (lambda - law.lambda_minus));
  return law.Q * root / (2.0 * std::numbers::pi * law.sigma2 * lambda);
}

double tw_fluctuation(const MpLaw& law, std::int64_t M) {
  if (M < 2) fail(ErrorCode::kDomain, "Tracy-Widom scale needs M >= 2");
  return law.lambda_plus * std::pow(static_cast<double>(M), -2.0 / 3.0);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open_zero();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::index(std::uint64_t n) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

WeightMatrix sample_gaussian(std::int64_t N, std::int64_t M, double sigma, std::uint64_t seed) {
  if (M < 2 || N < M) fail(ErrorCode::kDomain, "sample_gaussian needs N >= M >= 2");
  if (!(sigma > 0.0)) fail(ErrorCode::kDomain, "sample_gaussian needs sigma > 0");
  Rng rng(seed);
  WeightMatrix w;
  w.name = "gaussian";
  w.values.resize(N, M);
  for (std::int64_t r = 0; r < N; ++r) {
    for (std::int64_t c = 0; c < M; ++c) w.values(r, c) = sigma * rng.normal();
  }
  return w;
}

WeightMatrix sample_pareto(std::int64_t N, std::int64_t M, double mu, double x_m,
                           std::uint64_t seed) {
  if (M < 1 || N < M) fail(ErrorCode::kDomain, "sample_pareto needs N >= M >= 1");
  if (!(mu > 0.0) || !(x_m > 0.0)) fail(ErrorCode::kDomain, "sample_pareto needs mu, x_m > 0");
  Rng rng(seed);
  WeightMatrix w;
  w.name = "pareto";
  w.values.resize(N, M);
  const double inv_mu = -1.0 / mu;
  for (std::int64_t r = 0; r < N; ++r) {
    for (std::int64_t c = 0; c < M; ++c) {
      const double magnitude = x_m * std::pow(rng.uniform_open_zero(), inv_mu);
      w.values(r, c) = rng.coin() ? magnitude : -magnitude;
    }
  }
  return w;
}

Spectrum sample_wishart_spectrum(std::int64_t N, std::int64_t M, double sigma2, std::uint64_t seed) {
  if (N < M || M < 1) fail(ErrorCode::kDomain, "Wishart sampler needs N >= M >= 1");
  if (!(sigma2 > 0.0)) fail(ErrorCode::kDomain, "Wishart sampler needs sigma2 > 0");
  Rng rng(seed);
  // chi_k as the root of a sum of k squared standard normals.
  auto chi = [&rng](std::int64_t k) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < k; ++i) {
      const double z = rng.normal();
      sum += z * z;
    }
    return std::sqrt(sum);
  };
  // Lower bidiagonal B: diagonal chi_{N-i}, subdiagonal chi_{M-1-i}. The
  // eigenvalues of B B^T are distributed as those of G^T G.
  const auto m = static_cast<std::size_t>(M);
  std::vector<double> d(m), c(m > 0 ? m - 1 : 0);
  for (std::size_t i = 0; i < m; ++i) d[i] = chi(N - static_cast<std::int64_t>(i));
  for (std::size_t i = 0; i + 1 < m; ++i) c[i] = chi(M - 1 - static_cast<std::int64_t>(i));
  Eigen::VectorXd diag(M), sub(std::max<std::int64_t>(M - 1, 0));
  const double scale = sigma2 / static_cast<double>(N);
  for (std::size_t i = 0; i < m; ++i) {
    diag[static_cast<Eigen::Index>(i)] = (d[i] * d[i] + (i > 0 ? c[i - 1] * c[i - 1] : 0.0)) * scale;
    if (i + 1 < m) sub[static_cast<Eigen::Index>(i)] = c[i] * d[i] * scale;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::kNumeric, "tridiagonal eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  for (double& v : out) v = std::max(v, 0.0);
  return make_spectrum(std::move(out), N, M, "wishart");
}

Spectrum sample_imp_spectrum(std::int64_t M, double Q, std::uint64_t seed) {
  if (!(Q > 1.0)) fail(ErrorCode::kDomain, "inverse-MP sampler needs Q > 1");
  if (M < 8) fail(ErrorCode::kDomain, "inverse-MP sampler needs M >= 8");
  const auto N = static_cast<std::int64_t>(std::llround(Q * static_cast<double>(M)));
  constexpr int kAttempts = 10;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
    const Spectrum wishart = eigenspectrum(sample_gaussian(N, M, 1.0, s));
    if (wishart.eigenvalues.front() < 1e-12) continue;
    std::vector<double> inv(wishart.eigenvalues.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < inv.size(); ++i) {
      inv[i] = 1.0 / wishart.eigenvalues[i];
      sum += inv[i];
    }
    const double scale = static_cast<double>(inv.size()) / sum;
    for (double& v : inv) v *= scale;
    return make_spectrum(std::move(inv), N, M, "imp", Normalization::kTraceM);
  }
  fail(ErrorCode::kSingularSpectrum, "Wishart spectrum kept a near-zero eigenvalue");
}

WeightMatrix randomize_elementwise(const WeightMatrix& w, std::uint64_t seed) {
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(w.values.size()));
  for (std::int64_t r = 0; r < w.n_rows(); ++r) {
    for (std::int64_t c = 0; c < w.n_cols(); ++c) entries.push_back(w.values(r, c));
  }
  // Shuffle from sorted order so the result depends only on the multiset of
  // entries, not on where they sat in w.
  std::sort(entries.begin(), entries.end());
  Rng rng(seed);
  for (std::size_t i = entries.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.index(i));
    std::swap(entries[i - 1], entries[j]);
  }
  WeightMatrix out = w;
  out.name = w.name + "/randomized";
  std::size_t k = 0;
  for (std::int64_t r = 0; r < w.n_rows(); ++r) {
    for (std::int64_t c = 0; c < w.n_cols(); ++c) out.values(r, c) = entries[k++];
  }
  return out;
}

IdealSpectrum make_ideal_spectrum(std::int64_t M, std::int64_t tail_size, std::uint64_t seed) {
  if (tail_size < 3 || M - tail_size < 2) {
    fail(ErrorCode::kDomain, "ideal spectrum needs tail_size >= 3 and a bulk of >= 2");
  }
  const auto T = static_cast<std::size_t>(tail_size);
  // alpha = 2 Pareto quantiles x0 / (1 - u), u = (i - 1/2) / T, with x0 set
  // so that the log-eigenvalues sum to zero.
  std::vector<double> tail(T);
  double log_sum = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(T);
    tail[i] = 1.0 / (1.0 - u);
    log_sum += std::log(tail[i]);
  }
  const double x0 = std::exp(-log_sum / static_cast<double>(T));
  for (double& v : tail) v *= x0;

  const std::int64_t bulk_m = M - tail_size;
  const MpLaw unit = mp_law(1.0, 2.0);
  const double sigma2 = 0.5 * tail.front() / unit.lambda_plus;
  const Spectrum bulk = eigenspectrum(sample_gaussian(2 * bulk_m, bulk_m, std::sqrt(sigma2), seed));

  std::vector<double> all = bulk.eigenvalues;
  all.insert(all.end(), tail.begin(), tail.end());
  IdealSpectrum out;
  out.spectrum = make_spectrum(std::move(all), 2 * M, M, "ideal");
  out.tail_start = tail.front();
  out.tail_start_index = static_cast<std::size_t>(bulk_m);
  return out;
}

}  // namespace htsr
