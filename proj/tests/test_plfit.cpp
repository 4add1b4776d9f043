#include "doctest.h"

#include "htsr/error.hpp"
#include "htsr/plfit.hpp"
#include "htsr/rmt_models.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

using namespace htsr;

namespace {

// x_i = F^-1((i - 1/2) / n) for F(x) = 1 - x^(1 - alpha), xmin = 1.
std::vector<double> pareto_quantiles(double alpha, int n, double xmin = 1.0) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    x[static_cast<std::size_t>(i)] = xmin * std::pow(1.0 - u, -1.0 / (alpha - 1.0));
  }
  return x;
}

// Brute-force KS distance, written from the definition.
double ks_oracle(const std::vector<double>& tail, double alpha, double xmin) {
  const double n = static_cast<double>(tail.size());
  double d = 0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double f = 1.0 - std::pow(tail[i] / xmin, 1.0 - alpha);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
  }
  return d;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an htsr::Error");
  return ErrorCode::kNumeric;
}

}  // namespace

TEST_CASE("mle_alpha") {
  const std::vector<double> t{1, 2, 4, 8};
  CHECK(mle_alpha(t, 1.0) == doctest::Approx(1.0 + 4.0 / (6.0 * std::log(2.0))).epsilon(1e-14));
  CHECK(mle_alpha(t, 1.0) == doctest::Approx(1.96181).epsilon(1e-5));
  const double xmin = 0.7;
  const std::vector<double> single{std::exp(1.0) * xmin};
  CHECK(mle_alpha(single, xmin) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(code_of([] { mle_alpha(std::vector<double>{2.0, 2.0}, 2.0); }) == ErrorCode::kInfiniteAlpha);
  CHECK(code_of([] { mle_alpha(std::vector<double>{0.5, 2.0}, 1.0); }) == ErrorCode::kDomain);
}

TEST_CASE("property: mle_alpha decreases in each tail element") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(1.0, 50.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> tail(3 + gen() % 20);
    for (double& v : tail) v = u(gen);
    const double before = mle_alpha(tail, 1.0);
    tail[gen() % tail.size()] *= 1.0 + u(gen) / 10.0;
    CHECK(mle_alpha(tail, 1.0) < before);
  }
}

TEST_CASE("ks_distance") {
  CHECK(ks_distance(std::vector<double>{2.0}, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  const auto q = pareto_quantiles(2.0, 100);
  CHECK(ks_distance(q, 2.0, 1.0) <= 0.005 + 1e-15);
  CHECK(code_of([] { ks_distance(std::vector<double>{2.0}, 1.0, 1.0); }) == ErrorCode::kDomain);

  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(1.0, 30.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> tail(1 + gen() % 40);
    for (double& v : tail) v = u(gen);
    std::sort(tail.begin(), tail.end());
    const double alpha = 1.2 + u(gen) / 10;
    CHECK(ks_distance(tail, alpha, 1.0) == doctest::Approx(ks_oracle(tail, alpha, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("fit_pl on Pareto quantile spectra") {
  for (double alpha : {2.0, 2.5, 3.0}) {
    CAPTURE(alpha);
    const PowerLawFit f = fit_pl(test::spectrum_of(pareto_quantiles(alpha, 1000)));
    CHECK(std::abs(f.alpha - alpha) <= 0.1);
    CHECK(f.xmin <= pareto_quantiles(alpha, 1000)[100]);  // bottom decile
    CHECK(f.xmax == doctest::Approx(pareto_quantiles(alpha, 1000).back()));
  }
  const PowerLawFit f = fit_pl(test::spectrum_of(pareto_quantiles(2.5, 1000)));
  CHECK(f.alpha >= 2.4);
  CHECK(f.alpha <= 2.6);
}

TEST_CASE("fit_pl invariants") {
  std::mt19937_64 gen(15);
  std::lognormal_distribution<double> ln(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> ev(8 + gen() % 120);
    for (double& v : ev) v = ln(gen) * (gen() % 5 == 0 ? 10.0 : 1.0);
    const Spectrum s = test::spectrum_of(ev);
    const PowerLawFit f = fit_pl(s);
    CHECK(f.xmin <= f.xmax);
    const auto count = std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                     [&](double v) { return v >= f.xmin; });
    CHECK(f.tail_count == count);
    std::vector<double> tail(s.eigenvalues.end() - count, s.eigenvalues.end());
    CHECK(std::abs(f.d_ks - ks_distance(tail, f.alpha, f.xmin)) <= 1e-12);
    CHECK(f.tail_count >= 3);
    // The selected point is the minimum of the scan, latest among ties.
    double best = 2.0;
    double best_xmin = 0.0;
    for (const auto& p : f.scan) {
      if (p.d_ks <= best) {
        best = p.d_ks;
        best_xmin = p.xmin;
      }
    }
    CHECK(f.xmin == best_xmin);

    // Scale invariance: exact under powers of two, to rounding otherwise.
    const PowerLawFit f4 = fit_pl(scaled(s, 4.0, Normalization::kNone));
    CHECK(f4.alpha == f.alpha);
    CHECK(f4.tail_count == f.tail_count);
    CHECK(f4.xmin == 4.0 * f.xmin);
    const PowerLawFit fc = fit_pl(scaled(s, 0.3, Normalization::kNone));
    CHECK(fc.alpha == doctest::Approx(f.alpha).epsilon(1e-10));
    CHECK(fc.tail_count == f.tail_count);
  }
}

TEST_CASE("fit_pl refusals") {
  CHECK(code_of([] { fit_pl(test::spectrum_of({1, 2, 3, 4, 5})); }) == ErrorCode::kTooFewEigenvalues);
  CHECK(code_of([] { fit_pl(test::spectrum_of({0, 0, 0, 1, 2, 3, 4, 5, 6, 7})); }) ==
        ErrorCode::kTooFewEigenvalues);
  CHECK(code_of([] { fit_pl(test::spectrum_of(std::vector<double>(20, 3.0))); }) ==
        ErrorCode::kDegenerateSpectrum);
}

TEST_CASE("fit_pl on a Gaussian MP bulk is a poor fit") {
  const Spectrum s = eigenspectrum(sample_gaussian(1000, 1000, 1.0, 42));
  const PowerLawFit f = fit_pl(s);
  CHECK(f.d_ks > 0.05);
  CHECK_FALSE(is_good_fit(f));
  CHECK(classify(f.alpha, is_good_fit(f), s) == UniversalityClass::kRandomLike);
}

TEST_CASE("classify") {
  // A spectrum with eigenvalues well above its MP edge.
  const Spectrum heavy = test::spectrum_of(pareto_quantiles(2.5, 200));
  CHECK(count_above_mp_edge(heavy) > 0);
  CHECK(classify(3.0, true, heavy) == UniversalityClass::kFatTailed);
  CHECK(classify(1.5, true, heavy) == UniversalityClass::kVeryHeavyTailed);
  CHECK(classify(7.0, true, heavy) == UniversalityClass::kWeaklyHeavyTailed);
  CHECK(classify(6.0, true, heavy) == UniversalityClass::kFatTailed);
  CHECK(classify(2.0, true, heavy) == UniversalityClass::kVeryHeavyTailed);
  CHECK(classify(3.0, false, heavy) == UniversalityClass::kBulkPlusSpikes);

  const Spectrum flat = test::spectrum_of(std::vector<double>(50, 1.0));
  CHECK(classify(3.0, true, flat) == UniversalityClass::kRandomLike);

  std::vector<double> collapsed(100, 0.0);
  for (int i = 0; i < 80; ++i) collapsed[static_cast<std::size_t>(i)] = 1.0 + i;
  CHECK(classify(3.0, true, test::spectrum_of(collapsed, 200)) == UniversalityClass::kRankCollapse);
  CHECK(to_string(UniversalityClass::kRankCollapse) == "RankCollapse");
}
