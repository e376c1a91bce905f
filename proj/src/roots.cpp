#include "hypervirial/roots.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hypervirial/errors.hpp"

namespace hypervirial::roots {

RootResult find_root(const std::function<double(double)>& g, double lo, double hi,
                     const RootOptions& options) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lo;
  double b = hi;
  double fa = g(a);
  double fb = g(b);
  if (fa == 0.0) {
    return {a, 0.0, 0};
  }
  if (fb == 0.0) {
    return {b, 0.0, 0};
  }
  if ((fa > 0.0) == (fb > 0.0)) {
    throw DomainError("find_root: no sign change on [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double x_scale = std::max(1.0, std::abs(b));
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * options.x_tol * x_scale;
    const double xm = 0.5 * (c - b);
    const bool bracket_done = std::abs(xm) <= tol1;
    const bool residual_done = std::abs(fb) <= options.f_tol;
    const bool collapsed = std::abs(xm) <= 4.0 * eps * std::max(std::abs(b), 1e-300);
    if ((bracket_done && residual_done) || fb == 0.0 || collapsed) {
      return {b, std::abs(fb), iter};
    }
    // Once the bracket is tight but the residual is not, keep halving.
    const double step_floor = bracket_done ? 0.0 : tol1;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb) && !bracket_done) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      }
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::abs(d) > step_floor) {
      b += d;
    } else {
      b += xm > 0.0 ? tol1 : -tol1;
    }
    fb = g(b);
  }
  throw NumericalFailure("find_root: iteration budget exhausted", std::abs(fb));
}

}  // namespace hypervirial::roots
