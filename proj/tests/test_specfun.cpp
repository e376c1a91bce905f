#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "hypervirial/specfun.hpp"

using namespace hypervirial;
using namespace hypervirial::specfun;
namespace sf = hypervirial::specfun;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double egamma = std::numbers::egamma;

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

// U(a, b, z) = (1/Gamma(a)) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt with
// t = s^{1/a}, which removes the endpoint singularity.
double tricomi_integral(double a, double b, double z) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [=](double s) {
    const double t = std::pow(s, 1.0 / a);
    if (!std::isfinite(t)) {
      return 0.0;
    }
    return std::exp(-z * t + (b - a - 1.0) * std::log1p(t)) / a;
  };
  return integrator.integrate(f) / boost::math::tgamma(a);
}

// Central difference of W in z, one Richardson level per step pair.
double fd_dz(double kappa, double mu, double z, double h) {
  auto w = [&](double x) { return whittaker_w(kappa, mu, x).value; };
  const double d1 = (w(z + h) - w(z - h)) / (2 * h);
  const double d2 = (w(z + h / 2) - w(z - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

}  // namespace

TEST_CASE("gamma: closed values and poles") {
  CHECK(rel(sf::gamma(0.5).value, std::sqrt(pi)) < 1e-14);
  CHECK(rel(sf::gamma(5).value, 24.0) < 1e-14);
  CHECK(rel(sf::gamma(0.75).value / sf::gamma(0.25).value, 0.33798912003364236) < 1e-12);
  CHECK_THROWS_AS(sf::gamma(0.0), PoleError);
  CHECK_THROWS_AS(sf::gamma(-3.0), PoleError);
  CHECK(sf::gamma(-2.5).value < 0.0);
}

TEST_CASE("digamma and trigamma: closed values") {
  CHECK(rel(digamma(1).value, -egamma) < 1e-14);
  CHECK(rel(digamma(0.5).value, -egamma - 2 * std::log(2.0)) < 1e-14);
  CHECK(rel(digamma(2).value, 1 - egamma) < 1e-14);
  CHECK(rel(trigamma(1).value, pi * pi / 6) < 1e-14);
  CHECK(rel(trigamma(0.5).value, pi * pi / 2) < 1e-14);
  CHECK(rel(trigamma(3).value, pi * pi / 6 - 1.25) < 1e-13);
  CHECK_THROWS_AS(digamma(-2.0), PoleError);
  CHECK_THROWS_AS(trigamma(0.0), PoleError);
}

TEST_CASE("gamma family against boost over [-50, 50]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 400; ++i) {
    const double x = u(rng);
    if (std::abs(x - std::round(x)) < 1e-6 && x <= 0) {
      continue;
    }
    CHECK(rel(sf::gamma(x).value, boost::math::tgamma(x)) < 1e-12);
    CHECK(rel(digamma(x).value, boost::math::digamma(x)) < 1e-12);
    CHECK(rel(trigamma(x).value, boost::math::trigamma(x)) < 1e-10);
  }
}

TEST_CASE("reflection: Gamma(x) Gamma(1-x) sin(pi x) / pi = 1") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double x = u(rng);
    if (x == 0.0) {
      x = 0.5;
    }
    CHECK(std::abs(sf::gamma(x).value * sf::gamma(1 - x).value * std::sin(pi * x) / pi - 1) < 1e-11);
  }
}

TEST_CASE("digamma is the logarithmic derivative of gamma") {
  for (double x = 0.1; x <= 20.0; x += 0.37) {
    const double h = 1e-5 * std::max(1.0, x);
    const double fd = (std::lgamma(x + h) - std::lgamma(x - h)) / (2 * h);
    CHECK(std::abs(fd - digamma(x).value) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("pole-safe helpers") {
  CHECK(rgamma(0.0) == 0.0);
  CHECK(rgamma(-4.0) == 0.0);
  CHECK(rel(rgamma(0.5), 1 / std::sqrt(pi)) < 1e-14);
  // Psi(x)/Gamma(x) -> (-1)^{n+1} n! at x = -n.
  CHECK(rel(digamma_rgamma(0.0), -1.0) < 1e-12);
  CHECK(rel(digamma_rgamma(-2.0), -2.0) < 1e-12);
  // Psi'(x)/Gamma(x)^2 -> (n!)^2 at x = -n.
  CHECK(rel(trigamma_rgamma2(-3.0), 36.0) < 1e-12);
  CHECK(rel(trigamma_rgamma2(2.5), trigamma(2.5).value / std::pow(sf::gamma(2.5).value, 2)) < 1e-13);
}

TEST_CASE("tricomi_u: closed forms and the integral representation") {
  CHECK(rel(tricomi_u(1, 2, 2).value, 0.5) < 1e-14);
  CHECK(rel(tricomi_u(0, 1.5, 3.7).value, 1.0) < 1e-14);
  CHECK(rel(tricomi_u(0.3, 2, 1.1).value, tricomi_integral(0.3, 2, 1.1)) < 1e-9);
  for (double a : {0.2, 0.7, 1.3, 2.6, 5.5}) {
    for (double b : {1.5, 2.0}) {
      for (double z : {0.05, 0.9, 3.0, 12.0, 40.0}) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(z);
        CHECK(rel(tricomi_u(a, b, z).value, tricomi_integral(a, b, z)) < 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(tricomi_u(0.3, 2, 0.0), DomainError);
  CHECK_THROWS_AS(tricomi_u(0.3, 2, -1.0), DomainError);
}

TEST_CASE("whittaker_w: closed forms") {
  CHECK(rel(whittaker_w(0, 0.5, 1).value, std::exp(-0.5)) < 1e-14);
  CHECK(rel(whittaker_w(0.5, 0.5, 0).value, 1 / std::sqrt(pi)) < 1e-14);
  CHECK(rel(whittaker_w(0.75, 0.25, 4).value, std::exp(-2.0) * std::pow(4.0, 0.75)) < 1e-13);
  // Hydrogen 1s: W_{1,1/2}(z) = z e^{-z/2}.
  CHECK(rel(whittaker_w(1, 0.5, 3).value, 3 * std::exp(-1.5)) < 1e-13);
  CHECK_THROWS_AS(whittaker_w(0.3, 0.25, 0.0), DomainError);
  CHECK_THROWS_AS(whittaker_w(0.3, 0.3, 1.0), DomainError);
}

TEST_CASE("whittaker_w matches the Tricomi path") {
  for (double kappa = -5.0; kappa <= 5.0; kappa += 0.61) {
    for (double mu : {0.25, 0.5}) {
      for (double z : {0.1, 0.8, 3.3, 17.0, 49.0}) {
        const double direct = whittaker_w(kappa, mu, z).value;
        const double via_u = std::exp(-z / 2) * std::pow(z, mu + 0.5) * tricomi_u(mu - kappa + 0.5, 1 + 2 * mu, z).value;
        CHECK(std::abs(direct - via_u) <= 1e-9 * std::abs(via_u) + 1e-300);
      }
    }
  }
}

TEST_CASE("whittaker_w_dz: closed forms and finite differences") {
  CHECK(rel(whittaker_w_dz(0, 0.5, 1).value, -0.5 * std::exp(-0.5)) < 1e-13);
  const double closed = std::exp(-2.0) * (0.75 * std::pow(4.0, -0.25) - 0.5 * std::pow(4.0, 0.75));
  CHECK(rel(whittaker_w_dz(0.75, 0.25, 4).value, closed) < 1e-12);
  const double w = whittaker_w_dz(0.3, 0.25, 2.0).value;
  for (double h : {1e-3, 1e-4, 1e-5}) {
    CHECK(rel(w, fd_dz(0.3, 0.25, 2.0, h)) < 1e-8);
  }
}

TEST_CASE("whittaker recurrence for mu = 1/4") {
  for (double kappa = -5.0; kappa <= 5.0; kappa += 0.25) {
    for (double z = 0.1; z <= 50.0; z *= 1.6) {
      const double w0 = whittaker_w(kappa, 0.25, z).value;
      const double lhs = z * w0;
      const double rhs = whittaker_w(kappa + 1, 0.25, z).value + 2 * kappa * w0 +
                         (0.75 - kappa) * (0.25 - kappa) * whittaker_w(kappa - 1, 0.25, z).value;
      CAPTURE(kappa);
      CAPTURE(z);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(lhs) + 1e-290);
    }
  }
}

TEST_CASE("whittaker derivative consistency on the grid") {
  for (double kappa = -5.0; kappa <= 5.0; kappa += 0.7) {
    for (double mu : {0.25, 0.5}) {
      for (double z = 0.1; z <= 50.0; z *= 2.3) {
        const double d = whittaker_w_dz(kappa, mu, z).value;
        const double fd = fd_dz(kappa, mu, z, 1e-3 * z);
        const double scale = std::max(std::abs(d), std::abs(whittaker_w(kappa, mu, z).value) / z);
        CAPTURE(kappa);
        CAPTURE(z);
        CHECK(std::abs(d - fd) <= 1e-6 * scale + 1e-300);
      }
    }
  }
}

TEST_CASE("error estimates are finite and non-negative") {
  for (double x : {0.3, 2.7, -1.5, 33.0}) {
    CHECK(sf::gamma(x).abs_error_estimate >= 0.0);
    CHECK(std::isfinite(digamma(x).abs_error_estimate));
  }
  const auto w = whittaker_w(1.7, 0.5, 2.0);
  CHECK(w.abs_error_estimate >= 0.0);
  CHECK(std::isfinite(w.abs_error_estimate));
}
