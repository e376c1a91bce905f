#include <cmath>
#include <limits>
#include <string>

#include "hypervirial/specfun.hpp"

namespace hypervirial::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

[[noreturn]] void throw_pole(const char* name, double x) {
  throw PoleError(std::string(name) + ": pole at x = " + std::to_string(x));
}

double tan_pi(double x) {
  const double r = x - std::round(x);
  return std::tan(kPi * r);
}

// Psi for x >= 12 from the Stirling-type expansion; terms up to B14.
double digamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double tail =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 - inv2 * (1.0 / 12)))))));
  return std::log(x) - 0.5 * inv - tail;
}

double trigamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double tail =
      inv2 * inv *
      (1.0 / 6 -
       inv2 * (1.0 / 30 -
               inv2 * (1.0 / 42 -
                       inv2 * (1.0 / 30 -
                               inv2 * (5.0 / 66 - inv2 * (691.0 / 2730 - inv2 * (7.0 / 6)))))));
  return inv + 0.5 * inv2 + tail;
}

// Positive-argument kernels; the caller handles reflection.
double digamma_positive(double x) {
  double shift = 0.0;
  while (x < 12.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  return shift + digamma_asymptotic(x);
}

double trigamma_positive(double x) {
  double shift = 0.0;
  while (x < 12.0) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  return shift + trigamma_asymptotic(x);
}

double digamma_value(double x) {
  if (x > 0.0) {
    return digamma_positive(x);
  }
  // Psi(x) = Psi(1-x) - pi cot(pi x)
  return digamma_positive(1.0 - x) - kPi / tan_pi(x);
}

double trigamma_value(double x) {
  if (x > 0.0) {
    return trigamma_positive(x);
  }
  const double s = sin_pi(x);
  return -trigamma_positive(1.0 - x) + kPi * kPi / (s * s);
}

}  // namespace

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double sin_pi(double x) {
  const double n = std::round(x);
  const double r = x - n;
  const double s = std::sin(kPi * r);
  return std::fmod(std::abs(n), 2.0) == 1.0 ? -s : s;
}

double cos_pi(double x) {
  const double n = std::round(x);
  const double r = x - n;
  if (std::abs(r) == 0.5) {
    return 0.0;
  }
  const double c = std::cos(kPi * r);
  return std::fmod(std::abs(n), 2.0) == 1.0 ? -c : c;
}

SpecFunResult gamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw_pole("gamma", x);
  }
  const double v = std::tgamma(x);
  return {v, std::abs(v) * kEps * (4.0 + std::abs(x))};
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) {
    return 0.0;
  }
  if (x < 0.5) {
    // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    return std::tgamma(1.0 - x) * sin_pi(x) / kPi;
  }
  if (x > 171.0) {
    return 0.0;
  }
  return 1.0 / std::tgamma(x);
}

SpecFunResult digamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw_pole("digamma", x);
  }
  const double v = digamma_value(x);
  double scale = std::abs(v) + 1.0;
  if (x <= 0.0) {
    scale += std::abs(kPi / tan_pi(x)) * (1.0 + std::abs(x));
  }
  return {v, 8.0 * kEps * scale};
}

SpecFunResult trigamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw_pole("trigamma", x);
  }
  const double v = trigamma_value(x);
  double scale = std::abs(v);
  if (x <= 0.0) {
    scale *= 1.0 + std::abs(x);
  }
  return {v, 8.0 * kEps * scale};
}

double digamma_rgamma(double x) {
  if (x >= 0.5) {
    return digamma_positive(x) * rgamma(x);
  }
  // Gamma(1-x) [sin(pi x) Psi(1-x)/pi - cos(pi x)], regular at the poles.
  return std::tgamma(1.0 - x) * (sin_pi(x) * digamma_positive(1.0 - x) / kPi - cos_pi(x));
}

double trigamma_rgamma2(double x) {
  if (x >= 0.5) {
    const double r = rgamma(x);
    return trigamma_positive(x) * r * r;
  }
  const double g = std::tgamma(1.0 - x);
  const double s = sin_pi(x);
  return g * g * (1.0 - s * s * trigamma_positive(1.0 - x) / (kPi * kPi));
}

}  // namespace hypervirial::specfun
