#pragma once

// Adaptive Gauss-Kronrod quadrature on finite, semi-infinite and cutoff
// domains. A single integration is sequential and deterministic; the
// integrator holds no state between calls.

#include <functional>
#include <limits>

#include "hypervirial/errors.hpp"

namespace hypervirial::quad {

using Integrand = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  /// Accept also when error <= rel_tol * |value|. Zero disables.
  double rel_tol = 0.0;
  long max_evaluations = 1'000'000;
};

/// The requested tolerance was not met within the evaluation budget.
class ToleranceNotMet : public NumericalFailure {
 public:
  ToleranceNotMet(const std::string& what, QuadResult partial)
      : NumericalFailure(what, partial.abs_error_estimate), partial_(partial) {}

  const QuadResult& partial() const noexcept { return partial_; }

 private:
  QuadResult partial_;
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Integral over [a, b], a < b finite.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& options);
QuadResult integrate(const Integrand& f, double a, double b, double tol);

/// Integral over (a, inf). The tail is mapped onto (0, 1) by
/// x = a + s t / (1 - t), with the length scale s probed from the decay of f.
QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadOptions& options);
QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol);

/// Integral over [eps, b] (b may be infinity) for integrands that may grow
/// like 1/x near the origin. Geometric breakpoints eps, 10 eps, ... seed the
/// subdivision so the logarithmic region is resolved from the start.
QuadResult integrate_cutoff(const Integrand& f, double eps, double b, const QuadOptions& options);
QuadResult integrate_cutoff(const Integrand& f, double eps, double b, double tol);

}  // namespace hypervirial::quad
