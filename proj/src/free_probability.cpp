#include "htsr/free_probability.hpp"

#include "htsr/error.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace htsr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_truncated(int alpha, double lambda0, double lambda_max) {
  if (alpha < 2 || alpha > 4) fail(ErrorCode::kDomain, "truncated power law needs alpha in {2, 3, 4}");
  if (!(lambda0 > 0.0)) fail(ErrorCode::kDomain, "truncated power law needs lambda0 > 0");
  if (!(lambda_max > lambda0)) fail(ErrorCode::kDomain, "truncated power law needs lambda_max > lambda0");
}

// Power series of the bare Green's function about z = 0, valid for |z| < lambda0:
// G(z) = -sum_k z^k (alpha - 1) / ((alpha + k) lambda0^(k+1)).
Complex bare_pl_greens_series(int alpha, double lambda0, Complex z) {
  Complex sum = 0.0;
  Complex zk = 1.0;
  for (int k = 0; k < 80; ++k) {
    sum += zk * (static_cast<double>(alpha - 1) /
                 (static_cast<double>(alpha + k) * std::pow(lambda0, k + 1)));
    zk *= z;
    if (std::abs(zk) < 1e-18 * std::pow(lambda0, k + 1)) break;
  }
  return -sum;
}

double integrate(const RTransformModel& model, double a, double b) {
  if (b <= a) return 0.0;
  const auto re_r = [&model](double z) { return r_transform(model, Complex(z, 0.0)).real(); };
  std::vector<double> points{a};
  if (const auto* imp = std::get_if<InverseMpModel>(&model)) {
    const double cut = 0.5 * imp->kappa;  // kink of Re R at the branch point
    if (cut > a && cut < b) points.push_back(cut);
  }
  points.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double lo = points[i];
    const double hi = points[i + 1];
    // Segments are smooth inside; any kink or singularity sits at an end point,
    // which double-exponential quadrature handles without deep subdivision.
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    const double part = ts.integrate(re_r, lo, hi, 1e-13);
    if (!std::isfinite(part)) fail(ErrorCode::kNumeric, "quadrature of Re R did not converge");
    total += part;
  }
  return total;
}

}  // namespace

std::vector<double> normalized_moments(std::span<const double> tail, int upto) {
  if (tail.empty()) fail(ErrorCode::kDomain, "moments need a non-empty tail");
  if (upto < 1 || upto > 5) fail(ErrorCode::kDomain, "moments are computed up to order 5");
  std::vector<double> m(static_cast<std::size_t>(upto), 0.0);
  for (double x : tail) {
    double p = 1.0;
    for (int k = 0; k < upto; ++k) {
      p *= x;
      m[static_cast<std::size_t>(k)] += p;
    }
  }
  for (double& v : m) v /= static_cast<double>(tail.size());
  return m;
}

CumulantSet free_cumulants(std::span<const double> moments, std::int64_t m_tilde) {
  if (moments.size() < 5) fail(ErrorCode::kDomain, "free_cumulants needs five moments");
  CumulantSet c;
  std::copy_n(moments.begin(), 5, c.m.begin());
  c.m_tilde = m_tilde;
  const auto [m1, m2, m3, m4, m5] = c.m;
  c.kappa[0] = m1;
  c.kappa[1] = m2 - m1 * m1;
  c.kappa[2] = m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1;
  c.kappa[3] = m4 - 4.0 * m3 * m1 - 2.0 * m2 * m2 + 10.0 * m2 * m1 * m1 - 5.0 * std::pow(m1, 4);
  c.kappa[4] = m5 - 5.0 * m4 * m1 + 15.0 * m3 * m1 * m1 + 15.0 * m2 * m2 * m1 -
               35.0 * m2 * std::pow(m1, 3) - 5.0 * m3 * m2 + 14.0 * std::pow(m1, 5);
  return c;
}

CumulantSet cumulants_of(std::span<const double> tail) {
  const std::vector<double> m = normalized_moments(tail, 5);
  return free_cumulants(m, static_cast<std::int64_t>(tail.size()));
}

double greens_function(std::span<const double> eigenvalues, double z) {
  if (eigenvalues.empty()) fail(ErrorCode::kDomain, "Green's function of an empty spectrum");
  const auto [lo, hi] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
  if (z >= *lo && z <= *hi) {
    fail(ErrorCode::kSupport, "z = " + std::to_string(z) + " lies inside the spectrum");
  }
  double sum = 0.0;
  for (double v : eigenvalues) sum += 1.0 / (z - v);
  return sum / static_cast<double>(eigenvalues.size());
}

Complex bare_pl_greens(int alpha, double lambda0, Complex z) {
  if (alpha < 2 || alpha > 4) fail(ErrorCode::kDomain, "bare power-law G needs alpha in {2, 3, 4}");
  if (!(lambda0 > 0.0)) fail(ErrorCode::kDomain, "bare power-law G needs lambda0 > 0");
  if (z.imag() == 0.0 && z.real() >= lambda0) {
    fail(ErrorCode::kSupport, "z lies on the support [lambda0, inf)");
  }
  if (std::abs(z) < 0.25 * lambda0) return bare_pl_greens_series(alpha, lambda0, z);
  const Complex log_term = std::log(1.0 - z / lambda0);
  const Complex z2 = z * z;
  switch (alpha) {
    case 2:
      return 1.0 / z + lambda0 * log_term / z2;
    case 3:
      return 1.0 / z + 2.0 * lambda0 / z2 + 2.0 * lambda0 * lambda0 * log_term / (z2 * z);
    default:
      return 1.0 / z + 1.5 * lambda0 / z2 + 3.0 * lambda0 * lambda0 / (z2 * z) +
             3.0 * std::pow(lambda0, 3) * log_term / (z2 * z2);
  }
}

double bare_pl_r_numeric(int alpha, double lambda0, double w) {
  if (!(w < 0.0)) fail(ErrorCode::kDomain, "inversion is done for w < 0 on the negative axis");
  // G is negative and strictly decreasing on (-inf, lambda0), with G -> 0 at -inf.
  const auto g = [&](double z) { return bare_pl_greens(alpha, lambda0, Complex(z, 0.0)).real(); };
  double far = 1.0 / w;
  while (g(far) < w) far *= 2.0;
  double near = std::min(0.0, lambda0 * 0.5);
  while (g(near) > w) near = 0.5 * (near + lambda0);
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (far + near);
    if (mid == far || mid == near) break;
    (g(mid) < w ? near : far) = mid;
  }
  return 0.5 * (far + near) - 1.0 / w;
}

std::string_view model_name(const RTransformModel& model) {
  return std::visit(Overloaded{
                        [](const DiscreteModel&) { return std::string_view("discrete"); },
                        [](const FreeCauchyModel&) { return std::string_view("free-cauchy"); },
                        [](const InverseMpModel&) { return std::string_view("inverse-mp"); },
                        [](const LevyWignerModel&) { return std::string_view("levy-wigner"); },
                        [](const TruncatedPlModel&) { return std::string_view("truncated-pl"); },
                        [](const CumulantSeriesModel&) { return std::string_view("cumulant-series"); },
                    },
                    model);
}

LevyWignerModel levy_wigner(double alpha) { return LevyWignerModel{alpha, alpha - 2.0}; }

void validate(const RTransformModel& model) {
  std::visit(Overloaded{
                 [](const DiscreteModel&) {},
                 [](const FreeCauchyModel& m) {
                   if (m.gamma < 0.0) fail(ErrorCode::kDomain, "free Cauchy needs gamma >= 0");
                 },
                 [](const InverseMpModel& m) {
                   if (!(m.kappa > 0.0)) fail(ErrorCode::kDomain, "inverse-MP needs kappa > 0");
                 },
                 [](const LevyWignerModel& m) {
                   if (!(m.alpha > 0.0 && m.alpha < 2.0)) {
                     fail(ErrorCode::kDomain, "Levy-Wigner needs alpha in (0, 2)");
                   }
                 },
                 [](const TruncatedPlModel& m) { check_truncated(m.alpha, m.lambda0, m.lambda_max); },
                 [](const CumulantSeriesModel&) {},
             },
             model);
}

Complex r_transform(const RTransformModel& model, Complex z) {
  validate(model);
  return std::visit(
      Overloaded{
          [](const DiscreteModel& m) { return Complex(m.tail_sum, 0.0); },
          [](const FreeCauchyModel& m) { return Complex(m.a, m.gamma); },
          [z](const InverseMpModel& m) {
            const Complex root = std::sqrt(m.kappa * (m.kappa - 2.0 * z));
            return 2.0 * m.kappa / (m.kappa + root);
          },
          [z](const LevyWignerModel& m) { return m.b * std::pow(z, m.alpha - 2.0); },
          [z](const TruncatedPlModel& m) {
            const auto [k1, k2] = truncated_pl_cumulants(m.alpha, m.lambda0, m.lambda_max);
            return k1 + k2 * z;
          },
          [z](const CumulantSeriesModel& m) {
            Complex sum = 0.0;
            Complex zk = 1.0;
            for (double k : m.cumulants.kappa) {
              sum += k * zk;
              zk *= z;
            }
            return sum;
          },
      },
      model);
}

double g_lambda(const RTransformModel& model, double lambda, double lambda_min_ecs) {
  validate(model);
  if (!(lambda_min_ecs >= 0.0)) fail(ErrorCode::kDomain, "lambda_min_ecs must be >= 0");
  if (lambda < lambda_min_ecs) fail(ErrorCode::kDomain, "g_lambda needs lambda >= lambda_min_ecs");
  if (lambda == lambda_min_ecs) return 0.0;
  const double span = lambda - lambda_min_ecs;
  return std::visit(
      Overloaded{
          [&](const DiscreteModel& m) { return m.tail_sum * span; },
          [&](const FreeCauchyModel& m) { return m.a * span; },
          [&](const InverseMpModel& m) {
            // Re R = kappa / z beyond the branch point; below it R is real and
            // has no elementary antiderivative worth special-casing.
            if (lambda_min_ecs >= 0.5 * m.kappa) {
              return m.kappa * (std::log(lambda) - std::log(lambda_min_ecs));
            }
            return integrate(model, lambda_min_ecs, lambda);
          },
          [&](const LevyWignerModel& m) {
            const double p = m.alpha - 1.0;
            if (lambda_min_ecs == 0.0 && p <= 0.0) {
              fail(ErrorCode::kDomain, "Levy-Wigner integral diverges at 0 for alpha <= 1");
            }
            if (p == 0.0) return m.b * (std::log(lambda) - std::log(lambda_min_ecs));
            return m.b * (std::pow(lambda, p) - std::pow(lambda_min_ecs, p)) / p;
          },
          [&](const TruncatedPlModel& m) {
            const auto [k1, k2] = truncated_pl_cumulants(m.alpha, m.lambda0, m.lambda_max);
            return k1 * span + 0.5 * k2 * (lambda * lambda - lambda_min_ecs * lambda_min_ecs);
          },
          [&](const CumulantSeriesModel& m) {
            double sum = 0.0;
            double hi = lambda;
            double lo = lambda_min_ecs;
            for (std::size_t k = 0; k < m.cumulants.kappa.size(); ++k) {
              sum += m.cumulants.kappa[k] * (hi - lo) / static_cast<double>(k + 1);
              hi *= lambda;
              lo *= lambda_min_ecs;
            }
            return sum;
          },
      },
      model);
}

double g_lambda_quadrature(const RTransformModel& model, double lambda, double lambda_min_ecs) {
  validate(model);
  if (!(lambda_min_ecs >= 0.0)) fail(ErrorCode::kDomain, "lambda_min_ecs must be >= 0");
  if (lambda < lambda_min_ecs) fail(ErrorCode::kDomain, "g_lambda needs lambda >= lambda_min_ecs");
  return integrate(model, lambda_min_ecs, lambda);
}

std::pair<double, double> truncated_pl_cumulants(int alpha, double lambda0, double lambda_max) {
  check_truncated(alpha, lambda0, lambda_max);
  const double l0 = lambda0;
  const double lm = lambda_max;
  switch (alpha) {
    case 2: {
      const double c = l0 * lm / (lm - l0);
      const double k1 = c * std::log(lm / l0);
      return {k1, c * (lm - l0) - k1 * k1};
    }
    case 3: {
      const double c = 2.0 * l0 * l0 * lm * lm / (lm * lm - l0 * l0);
      const double k1 = 2.0 * lm * l0 / (lm + l0);
      return {k1, c * std::log(lm / l0) - k1 * k1};
    }
    default: {
      const double c = 3.0 * std::pow(l0, 3) * std::pow(lm, 3) / (std::pow(lm, 3) - std::pow(l0, 3));
      const double k1 =
          3.0 * lm * l0 * (lm * lm - l0 * l0) / (2.0 * (std::pow(lm, 3) - std::pow(l0, 3)));
      return {k1, c * (1.0 / l0 - 1.0 / lm) - k1 * k1};
    }
  }
}

std::array<double, 5> imp_free_cumulants(double kappa) {
  if (!(kappa > 0.0)) fail(ErrorCode::kDomain, "inverse-MP needs kappa > 0");
  return {1.0, 1.0 / (2.0 * kappa), 1.0 / (2.0 * kappa * kappa),
          5.0 / (8.0 * std::pow(kappa, 3)), 7.0 / (8.0 * std::pow(kappa, 4))};
}

}  // namespace htsr
