#pragma once

// Real-argument special functions: the Gamma family and the
// Tricomi U / Whittaker W pair used for the radial eigenfunctions.
//
// Every routine is a pure function of its arguments and holds no state,
// so concurrent calls are safe.

#include <numbers>

#include "hypervirial/errors.hpp"

namespace hypervirial::specfun {

struct SpecFunResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
};

inline constexpr double euler_gamma = std::numbers::egamma;

/// Gamma function. Throws PoleError at 0, -1, -2, ...
SpecFunResult gamma(double x);

/// Psi(x) = Gamma'(x)/Gamma(x). Throws PoleError at non-positive integers.
SpecFunResult digamma(double x);

/// Psi'(x). Throws PoleError at non-positive integers.
SpecFunResult trigamma(double x);

/// Confluent hypergeometric function of the second kind U(a, b, z), z > 0.
///
/// Regimes:
///  - a or a-b+1 a non-positive integer: the asymptotic sum terminates and is exact.
///  - z <= 2: Kummer-M connection formula (b not an integer) or the
///    logarithmic series with digamma coefficients (b an integer).
///  - otherwise: the Poincare series at a large enough abscissa, continued
///    inward with Taylor steps of Kummer's equation (the inward direction
///    is the stable one for the recessive solution).
///
/// Throws DomainError for z <= 0 and NumericalFailure if no regime reaches
/// the working precision.
SpecFunResult tricomi_u(double a, double b, double z);

/// Whittaker W_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} U(mu-kappa+1/2, 1+2mu, z).
/// mu must be 1/4 or 1/2. z = 0 is accepted for mu = 1/2 only, where
/// W(0) = 1/Gamma(1-kappa).
SpecFunResult whittaker_w(double kappa, double mu, double z);

/// dW_{kappa,mu}/dz from the contiguous relation
///   z W'_{k} = (k - z/2) W_{k} - (mu^2 - (k-1/2)^2) W_{k-1}.
SpecFunResult whittaker_w_dz(double kappa, double mu, double z);

// Pole-safe combinations. These are entire functions of x, so they are
// evaluated without dividing infinities: 1/Gamma uses reflection for x < 1/2.

/// 1/Gamma(x); exactly zero at the poles of Gamma.
double rgamma(double x);

/// Psi(x)/Gamma(x) = -(d/dx)(1/Gamma(x)).
double digamma_rgamma(double x);

/// Psi'(x)/Gamma(x)^2.
double trigamma_rgamma2(double x);

/// sin(pi x) and cos(pi x) with exact zeros at the integers / half-integers.
double sin_pi(double x);
double cos_pi(double x);

bool is_nonpositive_integer(double x);

}  // namespace hypervirial::specfun
