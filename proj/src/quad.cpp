#include "hypervirial/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace hypervirial::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// 21-point Kronrod nodes (descending) and weights with the embedded
// 10-point Gauss weights for the odd-indexed nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525199440, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Estimate {
  double value;
  double error;
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw NumericalFailure("quadrature: integrand is not finite at x = " + std::to_string(x), 0.0);
  }
  return y;
}

Estimate gauss_kronrod21(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = checked(f, center);
  double res_g = 0.0;
  double res_k = kWgk[10] * fc;
  double res_abs = std::abs(res_k);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(f, center - dx);
    f2[j] = checked(f, center + dx);
    const double sum = f1[j] + f2[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) {
      res_g += kWg[j / 2] * sum;
    }
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double abs_half = std::abs(half);
  res_asc *= abs_half;
  res_abs *= abs_half;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > kTiny / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * res_abs, err);
  }
  return {res_k * half, err};
}

struct Piece {
  Integrand f;
  double lo;
  double hi;
};

struct Segment {
  int piece;
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Segment& other) const { return error < other.error; }
};

QuadResult adaptive(const std::vector<Piece>& pieces, const QuadOptions& options, long evaluations) {
  std::priority_queue<Segment> queue;
  std::vector<Segment> frozen;
  double total = 0.0;
  double total_error = 0.0;
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    const Piece& p = pieces[i];
    const Estimate e = gauss_kronrod21(p.f, p.lo, p.hi);
    evaluations += 21;
    queue.push({i, p.lo, p.hi, e.value, e.error});
    total += e.value;
    total_error += e.error;
  }

  auto resum = [&] {
    total = 0.0;
    total_error = 0.0;
    std::vector<Segment> all;
    auto copy = queue;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    all.insert(all.end(), frozen.begin(), frozen.end());
    std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) {
      return x.piece != y.piece ? x.piece < y.piece : x.lo < y.lo;
    });
    for (const Segment& s : all) {
      total += s.value;
      total_error += s.error;
    }
  };

  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };

  int since_resum = 0;
  while (total_error > target()) {
    if (queue.empty()) {
      break;
    }
    if (evaluations + 42 > options.max_evaluations) {
      resum();
      throw ToleranceNotMet("quadrature: tolerance " + std::to_string(target()) +
                                " not met within " + std::to_string(options.max_evaluations) +
                                " evaluations (error estimate " + std::to_string(total_error) + ")",
                            {total, total_error, evaluations});
    }
    const Segment s = queue.top();
    queue.pop();
    const double mid = 0.5 * (s.lo + s.hi);
    const double width = s.hi - s.lo;
    if (mid <= s.lo || mid >= s.hi || width <= 64.0 * kEps * std::max(std::abs(s.lo), std::abs(s.hi))) {
      frozen.push_back(s);
      continue;
    }
    const Integrand& f = pieces[s.piece].f;
    const Estimate left = gauss_kronrod21(f, s.lo, mid);
    const Estimate right = gauss_kronrod21(f, mid, s.hi);
    evaluations += 42;
    queue.push({s.piece, s.lo, mid, left.value, left.error});
    queue.push({s.piece, mid, s.hi, right.value, right.error});
    total += left.value + right.value - s.value;
    total_error += left.error + right.error - s.error;
    if (++since_resum == 200) {
      resum();
      since_resum = 0;
    }
  }
  resum();
  if (total_error > target()) {
    throw ToleranceNotMet("quadrature: subdivision limit reached with error estimate " +
                              std::to_string(total_error),
                          {total, total_error, evaluations});
  }
  return {total, total_error, evaluations};
}

// Length scale of the decay of f beyond a: the farthest probe a + 2^j at
// which |f| is still within 1e-3 of the largest probe value.
double probe_scale(const Integrand& f, double a, long& evaluations) {
  double largest = 0.0;
  std::array<double, 19> values{};
  for (int j = -6; j <= 12; ++j) {
    const double y = std::abs(f(a + std::ldexp(1.0, j)));
    values[j + 6] = std::isfinite(y) ? y : 0.0;
    largest = std::max(largest, values[j + 6]);
  }
  evaluations += 19;
  double scale = std::ldexp(1.0, -6);
  for (int j = -6; j <= 12; ++j) {
    if (values[j + 6] >= 1e-3 * largest) {
      scale = std::ldexp(1.0, j);
    }
  }
  return scale;
}

Piece tail_piece(const Integrand& f, double a, double scale) {
  Integrand g = [f, a, scale](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + scale * t / one_minus;
    if (!std::isfinite(x)) {
      return 0.0;
    }
    const double y = f(x);
    if (y == 0.0) {
      return 0.0;
    }
    return y * scale / (one_minus * one_minus);
  };
  return {std::move(g), 0.0, 1.0};
}

void append_tail(std::vector<Piece>& pieces, const Integrand& f, double a, long& evaluations) {
  const double scale = probe_scale(f, a, evaluations);
  const Piece tail = tail_piece(f, a, scale);
  for (double t : {0.0, 0.25, 0.5, 0.75}) {
    pieces.push_back({tail.f, t, t + 0.25});
  }
}

void check_tolerance(const QuadOptions& options) {
  if (!(options.abs_tol > 0.0) && !(options.rel_tol > 0.0)) {
    throw DomainError("quadrature: tolerance must be positive");
  }
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& options) {
  check_tolerance(options);
  if (!std::isfinite(a) || !std::isfinite(b) || !(a <= b)) {
    throw DomainError("integrate: need finite a <= b");
  }
  if (a == b) {
    return {0.0, 0.0, 0};
  }
  return adaptive({{f, a, b}}, options, 0);
}

QuadResult integrate(const Integrand& f, double a, double b, double tol) {
  return integrate(f, a, b, QuadOptions{tol});
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadOptions& options) {
  check_tolerance(options);
  if (!std::isfinite(a)) {
    throw DomainError("integrate_semi_infinite: lower limit must be finite");
  }
  long evaluations = 0;
  std::vector<Piece> pieces;
  append_tail(pieces, f, a, evaluations);
  return adaptive(pieces, options, evaluations);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol) {
  return integrate_semi_infinite(f, a, QuadOptions{tol});
}

QuadResult integrate_cutoff(const Integrand& f, double eps, double b, const QuadOptions& options) {
  check_tolerance(options);
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("integrate_cutoff: eps must be positive");
  }
  if (!(b >= eps)) {
    throw DomainError("integrate_cutoff: need b >= eps");
  }
  if (b == eps) {
    return {0.0, 0.0, 0};
  }
  const double stop = std::isinf(b) ? std::max(1.0, 10.0 * eps) : b;
  std::vector<Piece> pieces;
  double lo = eps;
  while (lo < stop) {
    const double hi = std::min(10.0 * lo, stop);
    pieces.push_back({f, lo, hi});
    lo = hi;
  }
  long evaluations = 0;
  if (std::isinf(b)) {
    append_tail(pieces, f, stop, evaluations);
  }
  return adaptive(pieces, options, evaluations);
}

QuadResult integrate_cutoff(const Integrand& f, double eps, double b, double tol) {
  return integrate_cutoff(f, eps, b, QuadOptions{tol});
}

}  // namespace hypervirial::quad
