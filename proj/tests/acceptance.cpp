// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <variant>

#include "hypervirial/cli/commands.hpp"
#include "hypervirial/models.hpp"
#include "hypervirial/quad.hpp"
#include "hypervirial/specfun.hpp"
#include "hypervirial/virial.hpp"

using namespace hypervirial;
using namespace hypervirial::models;
using namespace hypervirial::virial;
namespace sf = hypervirial::specfun;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double egamma = std::numbers::egamma;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Running worst-case tracker: note(value, limit) fails the criterion when value > limit.
struct Worst {
  bool ok = true;
  double worst = 0.0;
  void note(double value, double limit) {
    if (!(value <= limit)) {
      ok = false;
    }
    worst = std::max(worst, std::isfinite(value) ? value : std::numeric_limits<double>::infinity());
  }
};

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

template <class F>
double boost_half_line(F g) {
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(g, 0.0, 1.0) + es.integrate(g, 1.0, std::numeric_limits<double>::infinity());
}

EigenState oscillator_state(Extension beta_over_sigma, int n) {
  return solve_oscillator_branch(ModelSpec::oscillator(beta_over_sigma, PhysicalScales::oscillator_sigma(1.0)), n);
}

Outcome robin() {
  const EigenState st = robin_free_eigenstate(ModelSpec::robin_free(1.0));
  const auto closed = std::get<VirialReport>(verify(st, {Method::ClosedForm, {}}));
  const auto quad = std::get<VirialReport>(verify(st, {Method::Quadrature, {}}));
  Worst w;
  w.note(std::abs(st.energy + 0.5), 1e-12);
  w.note(std::abs(closed.anomaly + 1.0), 1e-12);
  w.note(std::abs(closed.residual), 1e-12);
  w.note(std::abs(quad.anomaly + 1.0), 1e-9);
  w.note(std::abs(quad.residual), 1e-9);
  return {w.ok, "E0=" + fmt(st.energy) + " A=" + fmt(closed.anomaly) + " residual closed=" + fmt(closed.residual) +
                    " quadrature=" + fmt(quad.residual)};
}

Outcome threshold() {
  char printed[16];
  std::snprintf(printed, sizeof printed, "%.6f", f_harmonic(0.0));
  const double k34 = oscillator_state(0.34, 0).spectral_param;
  const double k33 = oscillator_state(0.33, 0).spectral_param;
  const bool ok = std::string(printed) == "0.337989" && k34 < 0.0 && k33 > 0.0;
  return {ok, std::string("F_H(0)=") + printed + " kappa0(0.34)=" + fmt(k34) + " kappa0(0.33)=" + fmt(k33)};
}

Outcome coulomb_asymptote() {
  cli::RunConfig c;
  c.command = cli::Command::Figure;
  c.model = "coulomb";
  c.x_min = -1e4;
  c.x_max = -10.0;
  c.samples = 200;
  const cli::CommandResult r = cli::dispatch(c);
  const auto& rows = r.table.rows;
  if (rows.size() < 2) {
    return {false, "figure returned too few rows"};
  }
  const double limit = 2 * egamma - 1;
  Worst w;
  std::string detail;
  for (const auto* row : {&rows.front(), &rows.back()}) {
    const double x = std::get<double>((*row)[1]);
    const double f = std::get<double>((*row)[2]);
    w.note(std::abs(f - limit) * std::abs(x), 0.06);
    detail += "|F-(2g-1)|*|lambda| at " + fmt(x) + " = " + fmt(std::abs(f - limit) * std::abs(x)) + "; ";
  }
  return {w.ok, detail};
}

Outcome oscillator_spectra() {
  Worst w;
  for (int n = 0; n <= 5; ++n) {
    w.note(std::abs(oscillator_state(0.0, n).spectral_param - (n + 0.25)), 1e-12);
    w.note(std::abs(oscillator_state(DirichletLimit{}, n).spectral_param - (n + 0.75)), 1e-12);
  }
  return {w.ok, "max |kappa_n - (n + 1/4 or 3/4)| = " + fmt(w.worst)};
}

Outcome oscillator_virial() {
  Worst closed;
  Worst quad;
  Worst agree;
  for (double b : {-2.0, -0.5, 0.0, 0.3, 0.5}) {
    for (int n = 0; n < 3; ++n) {
      const EigenState st = oscillator_state(b, n);
      const auto rc = std::get<VirialReport>(verify(st, {Method::ClosedForm, {}}));
      const auto rq = std::get<VirialReport>(verify(st, {Method::Quadrature, {}}));
      closed.note(std::abs(rc.residual), 1e-10);
      quad.note(std::abs(rq.residual), 1e-7);
      agree.note(std::abs(rc.anomaly - rq.anomaly), 1e-8);
    }
  }
  return {closed.ok && quad.ok && agree.ok, "max residual closed=" + fmt(closed.worst) + " quadrature=" +
                                                fmt(quad.worst) + " anomaly mismatch=" + fmt(agree.worst)};
}

Outcome coulomb_cancellation() {
  const auto start = std::chrono::steady_clock::now();
  Worst slope;
  Worst target;
  for (double ratio : {-1.0, 0.0, 0.5}) {
    const EigenState st = solve_coulomb_branch(ModelSpec::coulomb(ratio, PhysicalScales::coulomb_xi(1.0)), 0).value();
    const auto study = std::get<CutoffStudy>(verify(st));
    const double k = *st.model.scales.coupling_k;
    const double two_e = -k * k / (st.spectral_param * st.spectral_param);
    slope.note(rel(study.anomaly_log_slope, study.potential_log_slope), 1e-4);
    target.note(rel(study.extrapolated, two_e), 1e-5);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {slope.ok && target.ok && seconds <= 300.0, "max slope mismatch=" + fmt(slope.worst) +
                                                         " max extrapolation error=" + fmt(target.worst) +
                                                         " runtime=" + fmt(seconds) + "s"};
}

Outcome repulsive_coulomb() {
  const auto scales = PhysicalScales::coulomb_xi(-1.0);
  const auto states = solve_coulomb_eigenvalues(ModelSpec::coulomb(0.0, scales), 6);
  const auto none = solve_coulomb_eigenvalues(ModelSpec::coulomb(0.2 * -1.0, scales), 6);
  if (states.size() != 1) {
    return {false, "found " + std::to_string(states.size()) + " states for alpha/xi = 0"};
  }
  const EigenState& st = states.front();
  const double norm = boost_half_line([&](double r) {
    const double p = eval_eigenfunction(st, r);
    return p * p;
  });
  const bool ok = st.spectral_param < 0.0 && std::abs(norm - 1.0) <= 1e-8 && none.empty();
  return {ok, "lambda=" + fmt(st.spectral_param) + " |norm-1|=" + fmt(std::abs(norm - 1.0)) +
                  " states at alpha/xi=0.2: " + std::to_string(none.size())};
}

Outcome specfun_suite() {
  Worst closed;
  const double rt = std::sqrt(pi);
  const struct {
    double got;
    double want;
  } cases[] = {
      {sf::gamma(0.5).value, rt},
      {sf::gamma(5).value, 24.0},
      {sf::digamma(1).value, -egamma},
      {sf::digamma(0.5).value, -egamma - 2 * std::log(2.0)},
      {sf::digamma(2).value, 1 - egamma},
      {sf::trigamma(1).value, pi * pi / 6},
      {sf::trigamma(0.5).value, pi * pi / 2},
      {sf::trigamma(3).value, pi * pi / 6 - 1.25},
      {sf::tricomi_u(1, 2, 2).value, 0.5},
      {sf::tricomi_u(0, 1.5, 3.7).value, 1.0},
      {sf::whittaker_w(0, 0.5, 1).value, std::exp(-0.5)},
      {sf::whittaker_w(0.5, 0.5, 0).value, 1 / rt},
      {sf::whittaker_w(0.75, 0.25, 4).value, std::exp(-2.0) * std::pow(4.0, 0.75)},
      {sf::whittaker_w_dz(0, 0.5, 1).value, -0.5 * std::exp(-0.5)},
      {sf::whittaker_w_dz(0.75, 0.25, 4).value, std::exp(-2.0) * (0.75 * std::pow(4.0, -0.25) - 0.5 * std::pow(4.0, 0.75))},
      {f_harmonic(-0.75), rt / 2},
      {robin_free_eigenstate(ModelSpec::robin_free(2.0)).energy, -2.0},
      {robin_free_eigenstate(ModelSpec::robin_free(1.0)).norm_const, std::sqrt(2.0)},
      {eval_eigenfunction(robin_free_eigenstate(ModelSpec::robin_free(1.0)), 1.0), std::sqrt(2.0) / std::exp(1.0)},
      {quad::integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, 1e-13).value, 1.0},
      {quad::integrate_semi_infinite([](double x) { return x * x * std::exp(-x * x); }, 0.0, 1e-13).value, rt / 4},
      {quad::integrate_cutoff([](double x) { return 1 / x; }, 1e-3, 1.0, 1e-13).value, -std::log(1e-3)},
      {quad::integrate_cutoff([](double x) { return std::exp(-x); }, 1e-3, quad::infinity, 1e-13).value, std::exp(-1e-3)},
  };
  for (const auto& c : cases) {
    closed.note(rel(c.got, c.want), 1e-11);
  }
  closed.note(std::abs(f_harmonic(0.25)), 1e-11);

  Worst recurrence;
  for (double kappa = -5.0; kappa <= 5.0; kappa += 0.25) {
    for (double z = 0.1; z <= 50.0; z *= 1.25) {
      const double w0 = sf::whittaker_w(kappa, 0.25, z).value;
      const double rhs = sf::whittaker_w(kappa + 1, 0.25, z).value + 2 * kappa * w0 +
                         (0.75 - kappa) * (0.25 - kappa) * sf::whittaker_w(kappa - 1, 0.25, z).value;
      const double scale = std::abs(z * w0);
      if (scale > 1e-290) {
        recurrence.note(std::abs(z * w0 - rhs) / scale, 1e-8);
      }
    }
  }

  Worst prudnikov;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(0.2, 15.0);
  std::uniform_real_distribution<double> uk(-2.5, 2.5);
  for (int i = 0; i < 20; ++i) {
    const double x = ux(rng);
    const double mu = i % 2 == 0 ? 0.5 : 0.25;
    const double k1 = uk(rng);
    const double k2 = i % 5 == 0 ? k1 : uk(rng);
    const double h = 1e-3 * x;
    const auto F = [&](double t) { return whittaker_antiderivative(mu, {k1, k2}, t).value; };
    const double fd = (8 * (F(x + h) - F(x - h)) - (F(x + 2 * h) - F(x - 2 * h))) / (12 * h);
    const double want = sf::whittaker_w(k1, mu, x).value * sf::whittaker_w(k2, mu, x).value / x;
    prudnikov.note(std::abs(fd - want) / std::max(1.0, std::abs(want)), 1e-7);
  }
  for (auto [k1, k2] : {std::pair{0.43, 0.43}, std::pair{0.43, -0.7}, std::pair{1.8, 0.2}}) {
    const auto g = [&](double x) { return sf::whittaker_w(k1, 0.5, x).value * sf::whittaker_w(k2, 0.5, x).value / x; };
    const double want = quad::integrate_cutoff(g, 0.05, quad::infinity, 1e-12).value;
    prudnikov.note(std::abs(-whittaker_antiderivative(0.5, {k1, k2}, 0.05).value - want) / std::max(1.0, std::abs(want)),
                   1e-7);
  }
  return {closed.ok && recurrence.ok && prudnikov.ok, "closed forms max rel=" + fmt(closed.worst) +
                                                          " recurrence max=" + fmt(recurrence.worst) +
                                                          " antiderivative max=" + fmt(prudnikov.worst)};
}

Outcome dirichlet_universality() {
  Worst w;
  for (int n = 0; n <= 3; ++n) {
    const EigenState osc = oscillator_state(DirichletLimit{}, n);
    const auto ro = std::get<VirialReport>(verify(osc, {Method::Quadrature, {}}));
    w.note(std::abs(ro.anomaly), 1e-8);
    w.note(std::abs(2 * ro.potential - osc.energy), 1e-8);
    const EigenState c =
        solve_coulomb_branch(ModelSpec::coulomb(DirichletLimit{}, PhysicalScales::coulomb_xi(1.0)), n).value();
    const auto rc = std::get<VirialReport>(verify(c, {Method::Quadrature, {}}));
    w.note(std::abs(rc.anomaly), 1e-8);
    w.note(std::abs(rc.residual), 1e-8);
  }
  return {w.ok, "max deviation=" + fmt(w.worst)};
}

models::Jet bump(double x) {
  if (x <= 1.0 || x >= 2.0) {
    return {};
  }
  const double q = (x - 1) * (2 - x);
  const double q1 = 3 - 2 * x;
  const double g1 = q1 / (q * q);
  const double g2 = -2 / (q * q) - 2 * q1 * q1 / (q * q * q);
  const double g3 = 12 * q1 / (q * q * q) + 6 * q1 * q1 * q1 / (q * q * q * q);
  const double c = std::exp(-1 / q);
  return {c, g1 * c, (g2 + g1 * g1) * c, (g3 + 3 * g1 * g2 + g1 * g1 * g1) * c};
}

Outcome boundary_locality() {
  const EigenState st = oscillator_state(0.5, 0);
  const auto& s = st.model.scales;
  const std::vector<double> cuts = {1.0, 2.0, 4.0};
  const double base =
      anomaly_bulk_integral([&](double r) { return eigenfunction_jet(st, r); }, s, Generator::Scale3D, 0.0, cuts);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> amp(-5.0, 5.0);
  Worst w;
  for (int i = 0; i < 10; ++i) {
    const double a = amp(rng);
    const JetFunction f = [&](double r) {
      const Jet p = eigenfunction_jet(st, r);
      const Jet b = bump(r);
      return Jet{p.value + a * b.value, p.d1 + a * b.d1, p.d2 + a * b.d2, p.d3 + a * b.d3};
    };
    w.note(std::abs(anomaly_bulk_integral(f, s, Generator::Scale3D, 0.0, cuts) - base), 1e-9);
  }
  return {w.ok, "max change over 10 amplitudes=" + fmt(w.worst)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Robin free particle: E0, anomaly and 2<T> = A", robin},
      {"Gamma-ratio threshold", threshold},
      {"F_C asymptote 2 gamma - 1", coulomb_asymptote},
      {"Oscillator Neumann and Dirichlet spectra", oscillator_spectra},
      {"Oscillator generalized virial", oscillator_virial},
      {"Coulomb cancellation study", coulomb_cancellation},
      {"Repulsive Coulomb bound state", repulsive_coulomb},
      {"Special-function suite", specfun_suite},
      {"Dirichlet universality", dirichlet_universality},
      {"Boundary locality", boundary_locality},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2d %s: %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
    failures += o.ok ? 0 : 1;
    ++index;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
