#include "doctest.h"

#include "htsr/error.hpp"
#include "htsr/spectral.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace htsr;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = nd(gen);
  return a;
}

// Independent oracle: eigenvalues of W^T W / N from the symmetric solver.
std::vector<double> gram_eigenvalues(const Matrix& w) {
  const Matrix x = w.transpose() * w / static_cast<double>(w.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(x);
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST_CASE("eigenspectrum closed cases") {
  SUBCASE("sqrt(N) identity gives ones") {
    const Spectrum s = eigenspectrum(orient(std::sqrt(6.0) * Matrix::Identity(6, 6)));
    for (double v : s.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.Q == 1.0);
  }
  SUBCASE("diagonal (2, 4) gives d^2 / N") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 4;
    const Spectrum s = eigenspectrum(orient(d));
    CHECK(s.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.eigenvalues[1] == doctest::Approx(8.0).epsilon(1e-14));
  }
  SUBCASE("zero matrix") {
    const Spectrum s = eigenspectrum(orient(Matrix::Zero(4, 3)));
    CHECK(s.eigenvalues == std::vector<double>(3, 0.0));
    CHECK(s.zero_count() == 3);
    CHECK(s.lambda_min_positive() == 0.0);
  }
}

TEST_CASE("eigenspectrum agrees with the Gram-matrix oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix a = random_matrix(40 + 5 * static_cast<int>(seed), 30, seed);
    const Spectrum s = eigenspectrum(orient(a));
    const auto oracle = gram_eigenvalues(a);
    REQUIRE(s.eigenvalues.size() == oracle.size());
    CHECK(s.M == 30);
    CHECK(s.Q == doctest::Approx(static_cast<double>(a.rows()) / 30.0));
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      CHECK(s.eigenvalues[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: permutation invariance and scale covariance") {
  std::mt19937_64 gen(9);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = random_matrix(25, 12, 100 + t);
    Eigen::PermutationMatrix<Eigen::Dynamic> pr(25), pc(12);
    pr.setIdentity();
    pc.setIdentity();
    std::shuffle(pr.indices().data(), pr.indices().data() + 25, gen);
    std::shuffle(pc.indices().data(), pc.indices().data() + 12, gen);
    const Spectrum s0 = eigenspectrum(orient(a));
    const Spectrum s1 = eigenspectrum(orient(Matrix(pr * a * pc)));
    const double c = 0.37 + t;
    const Spectrum s2 = eigenspectrum(orient(Matrix(c * a)));
    for (std::size_t i = 0; i < s0.eigenvalues.size(); ++i) {
      CHECK(std::abs(s1.eigenvalues[i] - s0.eigenvalues[i]) <= 1e-10 * s0.lambda_max());
      CHECK(std::abs(s2.eigenvalues[i] - c * c * s0.eigenvalues[i]) <= 1e-10 * c * c * s0.lambda_max());
    }
  }
}

TEST_CASE("make_spectrum clamps small negatives only") {
  const Spectrum s = make_spectrum({3.0, -5e-13, 1.0}, 3, 3);
  CHECK(s.eigenvalues == std::vector<double>{0.0, 1.0, 3.0});
  CHECK_THROWS_AS(make_spectrum({1.0, -1e-9}, 2, 2), Error);
}

TEST_CASE("log histogram binning") {
  SUBCASE("{1, e, e^2} in two bins") {
    const Spectrum s = test::spectrum_of({1.0, std::exp(1.0), std::exp(2.0)});
    const LogHistogram h = log_histogram(s, 2);
    REQUIRE(h.bin_edges.size() == 3);
    CHECK(h.bin_edges[0] == doctest::Approx(0.0));
    CHECK(h.bin_edges[1] == doctest::Approx(1.0));
    CHECK(h.bin_edges[2] == doctest::Approx(2.0));
    const auto mass = h.masses();
    CHECK(mass[0] * 3 == doctest::Approx(1.0));
    CHECK(mass[1] * 3 == doctest::Approx(2.0));
    CHECK(h.total_mass == doctest::Approx(1.0));
  }
  SUBCASE("single positive eigenvalue") {
    const Spectrum s = test::spectrum_of({0.0, 0.0, 2.5});
    const LogHistogram h = log_histogram(s, 4);
    const auto mass = h.masses();
    CHECK(std::count_if(mass.begin(), mass.end(), [](double m) { return m > 0; }) == 1);
    CHECK(h.zero_count == 2);
  }
  SUBCASE("all zeros") {
    try {
      log_histogram(test::spectrum_of({0.0, 0.0}), 3);
      FAIL("expected empty-spectrum error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptySpectrum);
    }
  }
  SUBCASE("densities integrate to total mass") {
    std::vector<double> ev;
    for (int i = 1; i <= 97; ++i) ev.push_back(std::pow(1.07, i));
    ev.push_back(0.0);
    const LogHistogram h = log_histogram(test::spectrum_of(ev), 13, 1.5);
    double integral = 0;
    for (std::size_t b = 0; b < h.bins(); ++b) integral += h.densities[b] * h.width(b);
    CHECK(integral == doctest::Approx(h.total_mass).epsilon(1e-12));
    for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b) CHECK(h.bin_edges[b] < h.bin_edges[b + 1]);
    CHECK(h.below_lower == 5);  // 1.07^1..1.07^5 < 1.5
  }
}

namespace {

LogHistogram two_bin(double p0, double p1) {
  LogHistogram h;
  h.bin_edges = {0.0, 1.0, 2.0};
  h.densities = {p0, p1};
  h.total_mass = p0 + p1;
  return h;
}

// Hand-rolled base-2 JSD of two mass vectors.
double jsd_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0) d += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0) d += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return d;
}

}  // namespace

TEST_CASE("Jensen-Shannon") {
  CHECK(jensen_shannon(two_bin(1, 0), two_bin(1, 0)) == 0.0);
  CHECK(jensen_shannon(two_bin(1, 0), two_bin(0, 1)) == doctest::Approx(1.0).epsilon(1e-14));
  const double expected = 0.5 * (std::log2(4.0 / 3.0)) + 0.5 * (0.5 * std::log2(0.5 / 0.75) + 0.5 * std::log2(0.5 / 0.25));
  CHECK(expected == doctest::Approx(0.31128).epsilon(1e-5));
  CHECK(jensen_shannon(two_bin(1, 0), two_bin(0.5, 0.5)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(jsd_oracle({1, 0}, {0.5, 0.5}) == doctest::Approx(expected).epsilon(1e-12));

  SUBCASE("property: symmetry, self-distance zero, bounds") {
    std::mt19937_64 gen(21);
    std::lognormal_distribution<double> ln(0.0, 1.5);
    for (int t = 0; t < 25; ++t) {
      std::vector<double> a(50), b(70);
      for (double& v : a) v = ln(gen);
      for (double& v : b) v = 2.0 * ln(gen);
      const Spectrum sa = test::spectrum_of(a);
      const Spectrum sb = test::spectrum_of(b);
      const double ab = jensen_shannon(sa, sb);
      CHECK(ab == jensen_shannon(sb, sa));
      CHECK(jensen_shannon(sa, sa) == 0.0);
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
      const LogHistogram ha = log_histogram(sa, 20);
      const LogHistogram hb = log_histogram(sb, 20);
      CHECK(jensen_shannon(ha, hb) == doctest::Approx(jensen_shannon(hb, ha)).epsilon(1e-14));
      CHECK(jensen_shannon(ha, ha) == 0.0);
    }
  }
  SUBCASE("shared grid matches the oracle") {
    const Spectrum a = test::spectrum_of({1, 2, 3, 4, 5, 6, 7, 8});
    const Spectrum b = test::spectrum_of({2, 4, 8, 16});
    const double lo = 0.0, hi = std::log(16.0);
    std::vector<double> edges;
    for (int i = 0; i <= 4; ++i) edges.push_back(lo + (hi - lo) * i / 4);
    const auto pa = log_histogram_on_grid(a, edges).masses();
    const auto pb = log_histogram_on_grid(b, edges).masses();
    CHECK(jensen_shannon(a, b, 4) == doctest::Approx(jsd_oracle(pa, pb)).epsilon(1e-12));
  }
}
