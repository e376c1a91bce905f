#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hypervirial/specfun.hpp"

namespace hypervirial::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 600;

// Below this abscissa the connection formulas are used directly.
constexpr double kSmallZ = 2.0;
// Smallest abscissa at which the Poincare series is tried.
constexpr double kAsymptoticStart = 20.0;
constexpr double kAsymptoticLimit = 1.0e4;
// Relative precision demanded from the Poincare series before it is trusted.
constexpr double kSeriesTolerance = 32.0 * kEps;

struct Partial {
  double value = 0.0;
  double error = 0.0;
};

bool is_integer(double x) { return x == std::floor(x); }

// z^{-a} sum_k (a)_k (a-b+1)_k / k! (-z)^{-k}, summed to the smallest term.
// Exact when a or a-b+1 is a non-positive integer.
Partial u_asymptotic(double a, double b, double z) {
  const double ap = a - b + 1.0;
  if (is_nonpositive_integer(a)) {
    // Polynomial of degree -a in z; each power is formed directly so tiny z cannot overflow.
    const int n = static_cast<int>(std::lround(-a));
    double coef = 1.0;
    double sum = 0.0;
    double magnitude = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double t = coef * std::pow(z, n - k);
      sum += t;
      magnitude += std::abs(t);
      coef *= -(a + k) * (ap + k) / (k + 1.0);
    }
    return {sum, 2.0 * kEps * magnitude};
  }
  if (is_nonpositive_integer(ap)) {
    const Partial p = u_asymptotic(ap, 2.0 - b, z);
    const double scale = std::pow(z, 1.0 - b);
    return {scale * p.value, scale * p.error};
  }
  const double growth_start = std::abs(a) + std::abs(ap) + 1.0;

  double term = 1.0;
  double sum = 1.0;
  double magnitude = 1.0;
  double truncation = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double next = term * (a + k) * (ap + k) / (-(k + 1.0) * z);
    if (next == 0.0) {
      truncation = 0.0;
      break;
    }
    if (k + 1 > growth_start && std::abs(next) >= std::abs(term)) {
      truncation = std::abs(term);
      break;
    }
    sum += next;
    magnitude += std::abs(next);
    term = next;
    truncation = std::abs(next);
    if (std::abs(next) <= 0.5 * kEps * std::abs(sum)) {
      break;
    }
  }
  const double scale = std::pow(z, -a);
  return {sum * scale, (truncation + 2.0 * kEps * magnitude) * std::abs(scale)};
}

Partial kummer_m(double a, double b, double z) {
  double term = 1.0;
  double sum = 1.0;
  double magnitude = 1.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1.0));
    sum += term;
    magnitude += std::abs(term);
    if (term == 0.0) {
      break;
    }
    if (k > std::abs(a) && std::abs(term) <= 0.5 * kEps * std::abs(sum)) {
      break;
    }
  }
  return {sum, 2.0 * kEps * magnitude};
}

// b not an integer:
//   U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z) + Gamma(b-1)/Gamma(a) z^{1-b} M(a-b+1,2-b,z)
Partial u_small_fractional(double a, double b, double z) {
  const double c1 = std::tgamma(1.0 - b) * rgamma(a - b + 1.0);
  const double c2 = std::tgamma(b - 1.0) * rgamma(a) * std::pow(z, 1.0 - b);
  const Partial m1 = c1 == 0.0 ? Partial{} : kummer_m(a, b, z);
  const Partial m2 = c2 == 0.0 ? Partial{} : kummer_m(a - b + 1.0, 2.0 - b, z);
  const double v1 = c1 * m1.value;
  const double v2 = c2 * m2.value;
  const double err = std::abs(c1) * m1.error + std::abs(c2) * m2.error +
                     4.0 * kEps * (std::abs(v1) + std::abs(v2));
  return {v1 + v2, err};
}

// b = n+1 with n >= 0 (logarithmic case):
//   U = (-1)^{n+1}/(n! Gamma(a-n)) sum_k (a)_k/((n+1)_k k!) z^k
//         [ln z + Psi(a+k) - Psi(1+k) - Psi(n+k+1)]
//     + 1/Gamma(a) sum_{k=1}^{n} (k-1)! (1-a+k)_{n-k} / (n-k)! z^{-k}
// Valid when neither a nor a-n is a non-positive integer.
Partial u_small_logarithmic(double a, int n, double z) {
  double n_factorial = 1.0;
  for (int j = 2; j <= n; ++j) {
    n_factorial *= j;
  }
  const double prefactor = ((n + 1) % 2 == 0 ? 1.0 : -1.0) * rgamma(a - n) / n_factorial;
  const double log_z = std::log(z);

  double psi_one = -euler_gamma;  // Psi(1+k)
  double psi_n = -euler_gamma;    // Psi(n+1+k)
  for (int j = 1; j <= n; ++j) {
    psi_n += 1.0 / j;
  }

  double coeff = 1.0;
  double sum = 0.0;
  double magnitude = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const auto psi_a = digamma(a + k);
    const double bracket = log_z + psi_a.value - psi_one - psi_n;
    const double term = coeff * bracket;
    sum += term;
    magnitude += std::abs(coeff) * (std::abs(log_z) + std::abs(psi_a.value) + std::abs(psi_one) +
                                    std::abs(psi_n) + psi_a.abs_error_estimate / kEps);
    if (k > std::abs(a) && std::abs(term) <= 0.5 * kEps * std::abs(sum) &&
        std::abs(coeff) * (std::abs(log_z) + 1.0) <= kEps * std::abs(sum)) {
      break;
    }
    coeff *= (a + k) * z / ((n + 1.0 + k) * (k + 1.0));
    psi_one += 1.0 / (k + 1.0);
    psi_n += 1.0 / (n + k + 1.0);
    if (coeff == 0.0) {
      break;
    }
  }

  double finite = 0.0;
  double finite_mag = 0.0;
  double k_minus_one_factorial = 1.0;
  for (int k = 1; k <= n; ++k) {
    if (k > 1) {
      k_minus_one_factorial *= (k - 1);
    }
    double poch = 1.0;
    for (int j = 0; j < n - k; ++j) {
      poch *= (1.0 - a + k + j);
    }
    double nk_factorial = 1.0;
    for (int j = 2; j <= n - k; ++j) {
      nk_factorial *= j;
    }
    const double t = k_minus_one_factorial * poch / nk_factorial * std::pow(z, -k);
    finite += t;
    finite_mag += std::abs(t);
  }
  const double ra = rgamma(a);
  const double value = prefactor * sum + ra * finite;
  const double err = 4.0 * kEps * (std::abs(prefactor) * magnitude + std::abs(ra) * finite_mag) +
                     4.0 * kEps * std::abs(value);
  return {value, err};
}

Partial u_small(double a, double b, double z) {
  if (!is_integer(b)) {
    return u_small_fractional(a, b, z);
  }
  if (b >= 1.0) {
    return u_small_logarithmic(a, static_cast<int>(b) - 1, z);
  }
  // U(a,b,z) = z^{1-b} U(a-b+1, 2-b, z) moves b into [2, inf).
  const Partial t = u_small_logarithmic(a - b + 1.0, static_cast<int>(1.0 - b), z);
  const double s = std::pow(z, 1.0 - b);
  return {s * t.value, s * t.error};
}

// Advances (u, du) of  z w'' + (b - z) w' - a w = 0  from z0 to z0 + h by a
// Taylor series. With d_k = c_k h^k the coefficients obey
//   d_{k+2} = [(a+k) d_k h^2 - (k+1)(k+b-z0) d_{k+1} h] / (z0 (k+1)(k+2)).
// Returns the relative rounding growth of the step.
double taylor_step(double a, double b, double z0, double h, double& u, double& du) {
  double d0 = u;
  double d1 = du * h;
  double su = d0 + d1;
  double sd = d1;
  double magnitude = std::abs(d0) + std::abs(d1);
  for (int k = 0; k < kMaxTerms; ++k) {
    const double d2 =
        ((a + k) * d0 * h * h - (k + 1.0) * (k + b - z0) * d1 * h) / (z0 * (k + 1.0) * (k + 2.0));
    su += d2;
    sd += (k + 2.0) * d2;
    magnitude += (k + 2.0) * std::abs(d2);
    const double tail = (k + 2.0) * (std::abs(d1) + std::abs(d2));
    if (k > 3 && tail <= 0.25 * kEps * (std::abs(su) + std::abs(sd))) {
      break;
    }
    d0 = d1;
    d1 = d2;
  }
  u = su;
  du = sd / h;
  const double scale = std::abs(su) + std::abs(sd);
  return scale > 0.0 ? magnitude / scale : 1.0;
}

// Poincare values at a large abscissa, then Taylor steps inward to z.
Partial u_continued(double a, double b, double z) {
  double zs = std::max(kAsymptoticStart, z);
  Partial u0;
  Partial d0;
  for (;;) {
    u0 = u_asymptotic(a, b, zs);
    // U'(a,b,z) = -a U(a+1,b+1,z)
    const Partial shifted = u_asymptotic(a + 1.0, b + 1.0, zs);
    d0 = {-a * shifted.value, std::abs(a) * shifted.error};
    const bool good_u = u0.error <= kSeriesTolerance * std::abs(u0.value);
    const bool good_d = d0.error <= kSeriesTolerance * std::max(std::abs(d0.value), 1e-300);
    if (good_u && good_d) {
      break;
    }
    zs *= 1.5;
    if (zs > kAsymptoticLimit) {
      throw NumericalFailure("tricomi_u: Poincare series did not reach working precision for a=" +
                                 std::to_string(a) + " b=" + std::to_string(b),
                             u0.error);
    }
  }
  if (zs == z) {
    return u0;
  }

  double u = u0.value;
  double du = d0.value;
  double rel_error = u0.error / std::abs(u0.value) + d0.error / std::max(std::abs(d0.value), 1e-300);
  const double local_kappa = std::abs(0.5 * b - a);
  double x = zs;
  while (x > z) {
    const double wave = std::sqrt(std::max(1.0, local_kappa / x));
    double step = std::min({0.5 * x, 3.0, 1.5 / wave});
    if (x - step < z || x - step - z < 1e-3 * step) {
      step = x - z;
    }
    rel_error += kEps * taylor_step(a, b, x, -step, u, du);
    x -= step;
  }
  return {u, (rel_error + 4.0 * kEps) * std::abs(u)};
}

}  // namespace

SpecFunResult tricomi_u(double a, double b, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("tricomi_u: z must be positive and finite, got " + std::to_string(z));
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("tricomi_u: non-finite parameter");
  }
  if (is_nonpositive_integer(a) || is_nonpositive_integer(a - b + 1.0)) {
    const Partial p = u_asymptotic(a, b, z);
    return {p.value, p.error};
  }
  if (z <= kSmallZ) {
    const Partial p = u_small(a, b, z);
    if (p.error <= 1e-13 * std::abs(p.value)) {
      return {p.value, p.error};
    }
  }
  if (z >= kAsymptoticStart) {
    const Partial p = u_asymptotic(a, b, z);
    if (p.error <= kSeriesTolerance * std::abs(p.value)) {
      return {p.value, p.error};
    }
  }
  const Partial p = u_continued(a, b, z);
  return {p.value, p.error};
}

}  // namespace hypervirial::specfun
