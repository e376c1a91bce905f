#include <cmath>
#include <limits>
#include <string>

#include "hypervirial/specfun.hpp"

namespace hypervirial::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_mu(double mu) {
  if (mu != 0.25 && mu != 0.5) {
    throw DomainError("whittaker_w: mu must be 1/4 or 1/2, got " + std::to_string(mu));
  }
}

}  // namespace

SpecFunResult whittaker_w(double kappa, double mu, double z) {
  check_mu(mu);
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw DomainError("whittaker_w: z must be non-negative and finite, got " + std::to_string(z));
  }
  if (z == 0.0) {
    if (mu != 0.5) {
      throw DomainError("whittaker_w: z = 0 is only defined here for mu = 1/2");
    }
    const double v = rgamma(1.0 - kappa);
    return {v, 8.0 * kEps * std::abs(v) * (1.0 + std::abs(kappa))};
  }
  // W ~ z^kappa e^{-z/2}: far below the smallest subnormal it is zero.
  if (z > 100.0 && -0.5 * z + kappa * std::log(z) < -800.0) {
    return {0.0, 0.0};
  }
  const double a = mu - kappa + 0.5;
  const double b = 1.0 + 2.0 * mu;
  const SpecFunResult u = tricomi_u(a, b, z);
  const double prefactor = std::exp(-0.5 * z + (mu + 0.5) * std::log(z));
  const double v = prefactor * u.value;
  const double err = prefactor * u.abs_error_estimate + kEps * std::abs(v) * (2.0 + 0.5 * z);
  return {v, err};
}

SpecFunResult whittaker_w_dz(double kappa, double mu, double z) {
  check_mu(mu);
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("whittaker_w_dz: z must be positive and finite, got " + std::to_string(z));
  }
  const SpecFunResult w0 = whittaker_w(kappa, mu, z);
  const SpecFunResult w1 = whittaker_w(kappa - 1.0, mu, z);
  const double c0 = kappa - 0.5 * z;
  const double c1 = mu * mu - (kappa - 0.5) * (kappa - 0.5);
  const double t0 = c0 * w0.value;
  const double t1 = c1 * w1.value;
  const double v = (t0 - t1) / z;
  const double err = (std::abs(c0) * w0.abs_error_estimate + std::abs(c1) * w1.abs_error_estimate +
                      4.0 * kEps * (std::abs(t0) + std::abs(t1))) /
                     z;
  return {v, err};
}

}  // namespace hypervirial::specfun
