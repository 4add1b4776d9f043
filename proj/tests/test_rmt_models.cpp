#include "doctest.h"

#include "htsr/error.hpp"
#include "htsr/erg_ecs.hpp"
#include "htsr/plfit.hpp"
#include "htsr/rmt_models.hpp"
#include "htsr/spectral.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace htsr;

namespace {

std::vector<double> sorted_entries(const WeightMatrix& w) {
  std::vector<double> v(w.values.data(), w.values.data() + w.values.size());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("MP edges") {
  const MpLaw a = mp_law(1.0, 4.0);
  CHECK(a.lambda_minus == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(a.lambda_plus == doctest::Approx(2.25).epsilon(1e-15));
  const MpLaw b = mp_law(1.0, 1.0);
  CHECK(b.lambda_minus == 0.0);
  CHECK(b.lambda_plus == doctest::Approx(4.0));
  CHECK(mp_law(2.0, 1.0).lambda_plus == doctest::Approx(8.0));
  CHECK_THROWS_AS(mp_law(1.0, 0.5), Error);
  CHECK_THROWS_AS(mp_law(0.0, 2.0), Error);
}

TEST_CASE("MP density") {
  const MpLaw law = mp_law(1.0, 2.0);
  CHECK(mp_density(law, law.lambda_plus) == 0.0);
  CHECK(mp_density(law, law.lambda_plus + 0.1) == 0.0);
  CHECK(mp_density(law, law.lambda_minus * 0.5) == 0.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double q : {1.0, 2.0, 4.0}) {
    for (double sigma2 : {1.0, 0.3}) {
      const MpLaw l = mp_law(sigma2, q);
      const double mass =
          ts.integrate([&](double x) { return mp_density(l, x); }, l.lambda_minus, l.lambda_plus);
      CAPTURE(q);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("Tracy-Widom scale") {
  MpLaw law = mp_law(1.0, 1.0);
  CHECK(tw_fluctuation(law, 1000) == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(tw_fluctuation(law, 8) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tw_fluctuation(law, 1000000000) < 1e-5);
}

TEST_CASE("Gaussian sampler") {
  const WeightMatrix a = sample_gaussian(50, 40, 0.5, 7);
  const WeightMatrix b = sample_gaussian(50, 40, 0.5, 7);
  CHECK(a.values == b.values);
  CHECK(a.values != sample_gaussian(50, 40, 0.5, 8).values);
  CHECK(a.n_rows() == 50);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const WeightMatrix w = sample_gaussian(300, 200, 2.0, seed);
    CHECK(std::abs(w.values.mean()) <= 4.0 * 2.0 / std::sqrt(300.0 * 200.0));
    const double var = w.values.squaredNorm() / static_cast<double>(w.values.size());
    CHECK(var == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("Gaussian ESD: top eigenvalue below the TW-widened edge, no power-law tail") {
  int inside = 0, no_tail = 0;
  const MpLaw law = mp_law(1.0, 1.0);
  const double limit = law.lambda_plus + 3.0 * tw_fluctuation(law, 1000);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Spectrum s = eigenspectrum(sample_gaussian(1000, 1000, 1.0, seed));
    inside += s.lambda_max() <= limit;
    no_tail += fit_pl(s).d_ks > 0.03;
  }
  CHECK(inside >= 95);
  CHECK(no_tail >= 90);
}

TEST_CASE("Pareto sampler") {
  const WeightMatrix w = sample_pareto(1000, 1000, 1.0, 0.5, 3);
  CHECK(w.values.cwiseAbs().minCoeff() >= 0.5);
  CHECK(w.values == sample_pareto(1000, 1000, 1.0, 0.5, 3).values);
  for (double mu : {1.0, 3.0}) {
    const WeightMatrix p = sample_pareto(1000, 1000, mu, 1.0, 17);
    const double frac = static_cast<double>((p.values.cwiseAbs().array() > 10.0).count()) / 1e6;
    CAPTURE(mu);
    CHECK(frac == doctest::Approx(std::pow(10.0, -mu)).epsilon(0.2));
    const double positive = static_cast<double>((p.values.array() > 0.0).count()) / 1e6;
    CHECK(positive == doctest::Approx(0.5).epsilon(0.01));
  }
}

TEST_CASE("inverse-MP sampler") {
  const Spectrum s = sample_imp_spectrum(200, 2.0, 5);
  CHECK(s.M == 200);
  CHECK(s.N == 400);
  CHECK(s.normalization == Normalization::kTraceM);
  const double mean = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0) / 200.0;
  CHECK(std::abs(mean - 1.0) <= 1e-12);
  CHECK(sample_imp_spectrum(200, 2.0, 5).eigenvalues == s.eigenvalues);
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  CHECK_THROWS_AS(sample_imp_spectrum(200, 1.0, 5), Error);
  CHECK_THROWS_AS(sample_imp_spectrum(4, 2.0, 5), Error);
}

TEST_CASE("element-wise randomization") {
  const WeightMatrix w = sample_pareto(60, 40, 2.0, 1.0, 1);
  const WeightMatrix r = randomize_elementwise(w, 99);
  CHECK(r.values.rows() == 60);
  CHECK(sorted_entries(r) == sorted_entries(w));
  CHECK(r.values != w.values);
  CHECK(r.values.norm() == doctest::Approx(w.values.norm()).epsilon(1e-15));
  CHECK(r.values.mean() == doctest::Approx(w.values.mean()).epsilon(1e-13));
  CHECK(randomize_elementwise(w, 99).values == r.values);

  SUBCASE("mean-shift rank-1 spike survives randomization") {
    WeightMatrix g = sample_gaussian(200, 200, 1.0, 4);
    g.values.array() += 0.5;
    const Spectrum rs = eigenspectrum(randomize_elementwise(g, 1));
    const double s2 = g.values.squaredNorm() / 40000.0;
    const MpLaw law = mp_law(s2, 1.0);
    CHECK(rs.lambda_max() > law.lambda_plus + tw_fluctuation(law, 200));
  }
  SUBCASE("element-wise heavy tails keep a heavy-tailed ESD") {
    const WeightMatrix p = sample_pareto(300, 300, 1.0, 1.0, 2);
    const double jsd = jensen_shannon(eigenspectrum(p), eigenspectrum(randomize_elementwise(p, 3)));
    CHECK(jsd < 0.1);
  }
}

TEST_CASE("constructed ideal spectrum") {
  const IdealSpectrum id = make_ideal_spectrum(300, 40, 6);
  const auto& ev = id.spectrum.eigenvalues;
  REQUIRE(ev.size() == 300);
  CHECK(id.tail_start_index == 260);
  CHECK(ev[id.tail_start_index] == id.tail_start);
  const std::vector<double> tail(ev.begin() + 260, ev.end());
  CHECK(std::abs(trace_log(tail)) <= 1e-12);
  CHECK(ev[259] < id.tail_start);
  CHECK_THROWS_AS(make_ideal_spectrum(10, 2, 0), Error);
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.index(7) < 7);
  }
}

TEST_CASE("bidiagonal Wishart sampler matches the dense law") {
  // E[m1] = sigma2 and E[m2] = sigma2^2 (N + M + 1) / N for X = G^T G / N.
  for (auto [N, M] : {std::pair<std::int64_t, std::int64_t>{200, 200}, {400, 200}}) {
    double m1 = 0, m2 = 0, d1 = 0, d2 = 0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
      const Spectrum fast = sample_wishart_spectrum(N, M, 2.0, 100 + r);
      const Spectrum dense = eigenspectrum(sample_gaussian(N, M, std::sqrt(2.0), 100 + r));
      for (double v : fast.eigenvalues) {
        m1 += v;
        m2 += v * v;
      }
      for (double v : dense.eigenvalues) {
        d1 += v;
        d2 += v * v;
      }
    }
    const double n = static_cast<double>(reps * M);
    const double expect2 = 4.0 * static_cast<double>(N + M + 1) / static_cast<double>(N);
    CAPTURE(N);
    CHECK(m1 / n == doctest::Approx(2.0).epsilon(0.01));
    CHECK(m2 / n == doctest::Approx(expect2).epsilon(0.02));
    CHECK(d1 / n == doctest::Approx(2.0).epsilon(0.01));
    CHECK(d2 / n == doctest::Approx(expect2).epsilon(0.02));
  }
  const Spectrum s = sample_wishart_spectrum(300, 100, 1.0, 1);
  CHECK(s.eigenvalues == sample_wishart_spectrum(300, 100, 1.0, 1).eigenvalues);
  CHECK(s.Q == 3.0);
  const MpLaw law = mp_law(1.0, 3.0);
  CHECK(s.lambda_max() < law.lambda_plus + 3 * tw_fluctuation(law, 100));
  CHECK(s.eigenvalues.front() > law.lambda_minus - 3 * tw_fluctuation(law, 100));
}
