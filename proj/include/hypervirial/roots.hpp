#pragma once

#include <functional>

namespace hypervirial::roots {

struct RootOptions {
  /// Half-width of the final bracket, relative to max(1, |root|).
  double x_tol = 1e-13;
  /// Required |g(root)|.
  double f_tol = 1e-13;
  int max_iterations = 200;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Safeguarded bisection/secant/inverse-quadratic iteration (Brent) on a
/// bracket with g(lo) and g(hi) of opposite sign. Stops once both tolerances
/// hold, or when the bracket has collapsed to a few ulps.
/// Throws DomainError without a sign change, NumericalFailure on budget exhaustion.
RootResult find_root(const std::function<double(double)>& g, double lo, double hi,
                     const RootOptions& options = {});

}  // namespace hypervirial::roots
