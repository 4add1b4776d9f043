#pragma once

// Moments, free cumulants, Green's functions and R-transforms of the tail
// models, plus the norm generating function G(lambda) = int Re R.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace htsr {

using Complex = std::complex<double>;

struct CumulantSet {
  std::array<double, 5> m{};      // normalized moments m_1..m_5
  std::array<double, 5> kappa{};  // free cumulants kappa_1..kappa_5
  std::int64_t m_tilde = 0;       // tail size the moments came from
};

/// m_k = (1/n) sum x_i^k for k = 1..upto, on the values as given.
std::vector<double> normalized_moments(std::span<const double> tail, int upto = 5);

/// First five free cumulants from the first five moments (moment-cumulant
/// relations over non-crossing partitions, written out).
CumulantSet free_cumulants(std::span<const double> moments, std::int64_t m_tilde = 0);

/// normalized_moments followed by free_cumulants.
CumulantSet cumulants_of(std::span<const double> tail);

/// G(z) = (1/M) sum 1 / (z - lambda_i) for real z outside [min, max].
double greens_function(std::span<const double> eigenvalues, double z);

/// Closed-form Green's function of the untruncated density
/// (alpha - 1) lambda0^(alpha-1) lambda^(-alpha) on [lambda0, inf),
/// alpha in {2, 3, 4}. Principal branch of the logarithm.
Complex bare_pl_greens(int alpha, double lambda0, Complex z);

/// R(w) = B(w) - 1/w for small real w < 0, with B found by bisection on the
/// negative real axis so that bare_pl_greens(B) = w.
double bare_pl_r_numeric(int alpha, double lambda0, double w);

struct DiscreteModel {
  double tail_sum = 0.0;  // R(z) = sum of the tail eigenvalues
};
struct FreeCauchyModel {
  double a = 1.0;
  double gamma = 0.0;
};
struct InverseMpModel {
  double kappa = 0.5;
};
struct LevyWignerModel {
  double alpha = 1.5;  // in (0, 2); R(z) = b z^(alpha - 2)
  double b = -0.5;
};
struct TruncatedPlModel {
  int alpha = 2;  // 2, 3 or 4
  double lambda0 = 1.0;
  double lambda_max = 10.0;
};
struct CumulantSeriesModel {
  CumulantSet cumulants;
};

using RTransformModel = std::variant<DiscreteModel, FreeCauchyModel, InverseMpModel,
                                     LevyWignerModel, TruncatedPlModel, CumulantSeriesModel>;

std::string_view model_name(const RTransformModel& model);

/// Levy-Wigner model with b = alpha - 2.
LevyWignerModel levy_wigner(double alpha);

/// Throws kDomain on invalid parameters.
void validate(const RTransformModel& model);

/// R(z) per model. Inverse-MP is evaluated as 2 kappa / (kappa + sqrt(kappa
/// (kappa - 2z))), the rationalized form of (kappa - sqrt(kappa (kappa - 2z)))
/// / z, so z = 0 gives the limit 1 without cancellation.
Complex r_transform(const RTransformModel& model, Complex z);

/// int_{lambda_min_ecs}^{lambda} Re R(z) dz, closed form where available.
double g_lambda(const RTransformModel& model, double lambda, double lambda_min_ecs);

/// The same integral by adaptive Gauss-Kronrod quadrature of Re R.
double g_lambda_quadrature(const RTransformModel& model, double lambda, double lambda_min_ecs);

/// (kappa_1, kappa_2) of the power law alpha in {2, 3, 4} truncated to
/// [lambda0, lambda_max].
std::pair<double, double> truncated_pl_cumulants(int alpha, double lambda0, double lambda_max);

/// Taylor coefficients of the inverse-MP R-transform at 0.
std::array<double, 5> imp_free_cumulants(double kappa);

}  // namespace htsr
