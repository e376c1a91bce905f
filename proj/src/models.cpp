#include "hypervirial/models.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "hypervirial/quad.hpp"
#include "hypervirial/roots.hpp"
#include "hypervirial/specfun.hpp"

namespace hypervirial::models {

namespace sf = hypervirial::specfun;

namespace {

constexpr double kSqrtPi = 1.772453850905516027298167483341145;
constexpr double kCoulombAsymptote = 2.0 * sf::euler_gamma - 1.0;
constexpr double kIntegrityTol = 1e-6;
constexpr double kTinyRadius = 1e-140;

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw DomainError(what);
  }
}

void require_kind(const ModelSpec& spec, ModelKind kind, const char* who) {
  require(spec.kind == kind, std::string(who) + ": wrong model kind");
}

// Shrinks the offset from a pole until g has the wanted sign next to it.
double approach_pole(const std::function<double(double)>& g, double pole, double direction,
                     bool want_positive) {
  double offset = 1e-9 * std::max(1.0, std::abs(pole));
  for (;;) {
    const double x = pole + direction * offset;
    if (x == pole) {
      break;
    }
    const double y = g(x);
    if ((y > 0.0) == want_positive && y != 0.0) {
      return x;
    }
    offset *= 1e-3;
  }
  throw NumericalFailure("eigenvalue bracket: no sign change next to pole " + std::to_string(pole),
                         0.0);
}

roots::RootOptions root_options(double target) {
  roots::RootOptions options;
  options.f_tol = 1e-13 * std::max(1.0, std::abs(target));
  return options;
}

EigenState finish(EigenState state) {
  state.norm_const = 1.0;
  state.norm_const = normalization_constant(state);
  return state;
}

double coulomb_energy(const PhysicalScales& s, double lambda) {
  const double k = *s.coupling_k;
  return -(s.mass * k * k / (2.0 * s.hbar * s.hbar)) / (lambda * lambda);
}

double oscillator_energy(const PhysicalScales& s, double kappa) {
  return 2.0 * kappa * s.hbar * *s.omega;
}

// Unnormalized shape functions (norm_const = 1) and their r-derivatives.
double shape(const EigenState& st, double r) {
  const ModelSpec& m = st.model;
  switch (m.kind) {
    case ModelKind::RobinFree:
      return std::exp(-st.spectral_param * r);
    case ModelKind::CoulombPoint: {
      const double lambda = st.spectral_param;
      return sf::whittaker_w(lambda, 0.5, m.scales.xi() * r / lambda).value;
    }
    case ModelKind::OscillatorPoint: {
      const double sigma = m.scales.sigma();
      const double sr = sigma * r;
      if (sr < kTinyRadius) {
        // sigma^2 r^2 would underflow; the first two Taylor terms are exact to rounding.
        const double k = st.spectral_param;
        return kSqrtPi * (sf::rgamma(0.75 - k) - 2.0 * sr * sf::rgamma(0.25 - k));
      }
      return sf::whittaker_w(st.spectral_param, 0.25, sr * sr).value / std::sqrt(sr);
    }
  }
  return 0.0;
}

double shape_dr(const EigenState& st, double r) {
  const ModelSpec& m = st.model;
  switch (m.kind) {
    case ModelKind::RobinFree:
      return -st.spectral_param * std::exp(-st.spectral_param * r);
    case ModelKind::CoulombPoint: {
      const double lambda = st.spectral_param;
      const double scale = m.scales.xi() / lambda;
      return scale * sf::whittaker_w_dz(lambda, 0.5, scale * r).value;
    }
    case ModelKind::OscillatorPoint: {
      const double sigma = m.scales.sigma();
      const double sr = sigma * r;
      if (sr < kTinyRadius) {
        return -2.0 * sigma * kSqrtPi * sf::rgamma(0.25 - st.spectral_param);
      }
      const double z = sr * sr;
      const double w = sf::whittaker_w(st.spectral_param, 0.25, z).value;
      const double dw = sf::whittaker_w_dz(st.spectral_param, 0.25, z).value;
      return (2.0 * sigma * sigma * r * dw - w / (2.0 * r)) / std::sqrt(sr);
    }
  }
  return 0.0;
}

double model_length(const EigenState& st) {
  switch (st.model.kind) {
    case ModelKind::RobinFree:
      return 1.0 / st.spectral_param;
    case ModelKind::CoulombPoint:
      return st.spectral_param / st.model.scales.xi();
    case ModelKind::OscillatorPoint:
      return 1.0 / st.model.scales.sigma();
  }
  return 1.0;
}

}  // namespace

PhysicalScales PhysicalScales::free(double hbar, double mass) {
  PhysicalScales s;
  s.hbar = hbar;
  s.mass = mass;
  s.validate();
  return s;
}

PhysicalScales PhysicalScales::coulomb(double hbar, double mass, double k) {
  PhysicalScales s = free(hbar, mass);
  require(std::isfinite(k), "PhysicalScales: coupling k must be finite");
  s.coupling_k = k;
  return s;
}

PhysicalScales PhysicalScales::coulomb_xi(double xi) { return coulomb(1.0, 1.0, 0.5 * xi); }

PhysicalScales PhysicalScales::oscillator(double hbar, double mass, double omega) {
  PhysicalScales s = free(hbar, mass);
  s.omega = omega;
  s.validate();
  return s;
}

PhysicalScales PhysicalScales::oscillator_sigma(double sigma) {
  require(sigma > 0.0 && std::isfinite(sigma), "PhysicalScales: sigma must be positive");
  return oscillator(1.0, 1.0, sigma * sigma);
}

double PhysicalScales::xi() const {
  require(coupling_k.has_value(), "PhysicalScales: no Coulomb coupling");
  return 2.0 * mass * *coupling_k / (hbar * hbar);
}

double PhysicalScales::sigma() const {
  require(omega.has_value(), "PhysicalScales: no oscillator frequency");
  return std::sqrt(mass * *omega / hbar);
}

void PhysicalScales::validate() const {
  require(hbar > 0.0 && std::isfinite(hbar), "PhysicalScales: hbar must be positive");
  require(mass > 0.0 && std::isfinite(mass), "PhysicalScales: mass must be positive");
  if (omega) {
    require(*omega > 0.0 && std::isfinite(*omega), "PhysicalScales: omega must be positive");
  }
}

ModelSpec ModelSpec::robin_free(double alpha, PhysicalScales scales) {
  scales.validate();
  require(alpha > 0.0 && std::isfinite(alpha), "RobinFree: alpha must be positive");
  return {ModelKind::RobinFree, alpha, scales};
}

ModelSpec ModelSpec::coulomb(Extension alpha, PhysicalScales scales) {
  scales.validate();
  require(scales.coupling_k.has_value(), "CoulombPoint: coupling k required");
  require(scales.xi() != 0.0, "CoulombPoint: xi must be nonzero");
  if (const double* a = std::get_if<double>(&alpha)) {
    require(std::isfinite(*a), "CoulombPoint: alpha must be finite");
  }
  return {ModelKind::CoulombPoint, alpha, scales};
}

ModelSpec ModelSpec::oscillator(Extension beta, PhysicalScales scales) {
  scales.validate();
  require(scales.omega.has_value(), "OscillatorPoint: omega required");
  if (const double* b = std::get_if<double>(&beta)) {
    require(std::isfinite(*b), "OscillatorPoint: beta must be finite");
  }
  return {ModelKind::OscillatorPoint, beta, scales};
}

double ModelSpec::extension_value() const {
  if (const double* v = std::get_if<double>(&extension)) {
    return *v;
  }
  throw DomainError("extension_value: Dirichlet limit has no finite value");
}

double ModelSpec::extension_ratio() const {
  const double v = extension_value();
  switch (kind) {
    case ModelKind::RobinFree:
      return v;
    case ModelKind::CoulombPoint:
      return v / scales.xi();
    case ModelKind::OscillatorPoint:
      return v / scales.sigma();
  }
  return v;
}

double f_coulomb(double lambda) {
  if (lambda == 0.0) {
    throw PoleError("f_coulomb: pole at lambda = 0");
  }
  return sf::digamma(1.0 - lambda).value - std::log(std::abs(lambda)) + 0.5 / lambda +
         kCoulombAsymptote;
}

double f_harmonic(double kappa) {
  const double a = 0.75 - kappa;
  const double b = 0.25 - kappa;
  if (sf::is_nonpositive_integer(a)) {
    throw PoleError("f_harmonic: pole at kappa = " + std::to_string(kappa));
  }
  if (sf::is_nonpositive_integer(b)) {
    return 0.0;
  }
  if (kappa <= 0.25) {
    // Both arguments positive: the log form avoids overflow for very negative kappa.
    return std::exp(std::lgamma(a) - std::lgamma(b));
  }
  // Reflection turns Gamma(a)/Gamma(b) into Gamma(1-b)/Gamma(1-a) times a sine ratio.
  return sf::sin_pi(b) / sf::sin_pi(a) * std::exp(std::lgamma(1.0 - b) - std::lgamma(1.0 - a));
}

std::optional<EigenState> solve_coulomb_branch(const ModelSpec& spec, int branch) {
  require_kind(spec, ModelKind::CoulombPoint, "solve_coulomb_branch");
  require(branch >= 0, "solve_coulomb_branch: branch must be >= 0");
  const double xi = spec.scales.xi();
  if (xi < 0.0 && branch > 0) {
    return std::nullopt;
  }
  EigenState st;
  st.branch = branch;
  st.model = spec;
  if (spec.is_dirichlet()) {
    if (xi < 0.0) {
      return std::nullopt;
    }
    st.spectral_param = branch + 1.0;
  } else {
    const double target = spec.extension_ratio();
    auto g = [target](double l) { return f_coulomb(l) - target; };
    double lo;
    double hi;
    if (xi > 0.0) {
      lo = approach_pole(g, branch, +1.0, true);
      hi = approach_pole(g, branch + 1.0, -1.0, false);
    } else {
      if (!(target < kCoulombAsymptote)) {
        return std::nullopt;
      }
      hi = approach_pole(g, 0.0, -1.0, false);
      lo = -1.0;
      while (g(lo) <= 0.0) {
        lo *= 2.0;
        if (lo < -1e12) {
          // The gap below 2 gamma - 1 is beyond double resolution.
          return std::nullopt;
        }
      }
    }
    st.spectral_param = roots::find_root(g, lo, hi, root_options(target)).root;
  }
  st.energy = coulomb_energy(spec.scales, st.spectral_param);
  return finish(st);
}

std::vector<EigenState> solve_coulomb_eigenvalues(const ModelSpec& spec, int n_max) {
  require(n_max >= 0, "solve_coulomb_eigenvalues: n_max must be >= 0");
  std::vector<EigenState> out;
  for (int n = 0; n < n_max; ++n) {
    auto st = solve_coulomb_branch(spec, n);
    if (!st) {
      break;
    }
    out.push_back(*st);
  }
  return out;
}

EigenState solve_oscillator_branch(const ModelSpec& spec, int branch) {
  require_kind(spec, ModelKind::OscillatorPoint, "solve_oscillator_branch");
  require(branch >= 0, "solve_oscillator_branch: branch must be >= 0");
  EigenState st;
  st.branch = branch;
  st.model = spec;
  if (spec.is_dirichlet()) {
    st.spectral_param = branch + 0.75;
  } else {
    const double target = spec.extension_ratio();
    auto g = [target](double k) { return f_harmonic(k) - target; };
    const double hi = approach_pole(g, branch + 0.75, -1.0, false);
    double lo;
    if (branch == 0) {
      lo = -1.0;
      while (g(lo) <= 0.0) {
        lo *= 2.0;
        if (lo < -1e300) {
          throw NumericalFailure("solve_oscillator_branch: no lower bracket", 0.0);
        }
      }
    } else {
      lo = approach_pole(g, branch - 0.25, +1.0, true);
    }
    st.spectral_param = roots::find_root(g, lo, hi, root_options(target)).root;
  }
  st.energy = oscillator_energy(spec.scales, st.spectral_param);
  return finish(st);
}

std::vector<EigenState> solve_oscillator_eigenvalues(const ModelSpec& spec, int n_max) {
  require(n_max >= 0, "solve_oscillator_eigenvalues: n_max must be >= 0");
  std::vector<EigenState> out;
  out.reserve(n_max);
  for (int n = 0; n < n_max; ++n) {
    out.push_back(solve_oscillator_branch(spec, n));
  }
  return out;
}

EigenState robin_free_eigenstate(const ModelSpec& spec) {
  require_kind(spec, ModelKind::RobinFree, "robin_free_eigenstate");
  const double alpha = spec.extension_value();
  require(alpha > 0.0, "robin_free_eigenstate: alpha must be positive");
  EigenState st;
  st.branch = 0;
  st.spectral_param = alpha;
  st.model = spec;
  st.energy = -spec.scales.hbar * spec.scales.hbar * alpha * alpha / (2.0 * spec.scales.mass);
  return finish(st);
}

double eval_eigenfunction(const EigenState& state, double r) {
  require(r > 0.0, "eval_eigenfunction: r must be positive");
  return state.norm_const * shape(state, r);
}

double eval_eigenfunction_dr(const EigenState& state, double r) {
  require(r > 0.0, "eval_eigenfunction_dr: r must be positive");
  return state.norm_const * shape_dr(state, r);
}

double potential(const ModelSpec& spec, double r) {
  switch (spec.kind) {
    case ModelKind::RobinFree:
      return 0.0;
    case ModelKind::CoulombPoint:
      return -*spec.scales.coupling_k / r;
    case ModelKind::OscillatorPoint:
      return 0.5 * spec.scales.mass * *spec.scales.omega * *spec.scales.omega * r * r;
  }
  return 0.0;
}

double potential_dr(const ModelSpec& spec, double r) {
  switch (spec.kind) {
    case ModelKind::RobinFree:
      return 0.0;
    case ModelKind::CoulombPoint:
      return *spec.scales.coupling_k / (r * r);
    case ModelKind::OscillatorPoint:
      return spec.scales.mass * *spec.scales.omega * *spec.scales.omega * r;
  }
  return 0.0;
}

Jet eigenfunction_jet(const EigenState& state, double r) {
  Jet j;
  j.value = eval_eigenfunction(state, r);
  j.d1 = eval_eigenfunction_dr(state, r);
  const PhysicalScales& s = state.model.scales;
  const double c = 2.0 * s.mass / (s.hbar * s.hbar);
  const double gap = potential(state.model, r) - state.energy;
  j.d2 = c * gap * j.value;
  j.d3 = c * (potential_dr(state.model, r) * j.value + gap * j.d1);
  return j;
}

double normalization_constant_closed(const EigenState& state) {
  const double p = state.spectral_param;
  switch (state.model.kind) {
    case ModelKind::RobinFree:
      return std::sqrt(2.0 * p);
    case ModelKind::CoulombPoint: {
      // xi Gamma(-l)^2 / (2 l Psi'(-l) + 2 - 1/l), rewritten without Gamma poles.
      const double rg = sf::rgamma(-p);
      const double denom = 2.0 * p * sf::trigamma_rgamma2(-p) + (2.0 - 1.0 / p) * rg * rg;
      return std::sqrt(state.model.scales.xi() / denom);
    }
    case ModelKind::OscillatorPoint: {
      const double a = 0.75 - p;
      const double d = sf::rgamma(a - 0.5) * sf::digamma_rgamma(a) -
                       sf::rgamma(a) * sf::digamma_rgamma(a - 0.5);
      return std::sqrt(2.0 * state.model.scales.sigma() / std::numbers::pi / d);
    }
  }
  return 1.0;
}

double normalization_constant(const EigenState& state) {
  EigenState unit = state;
  unit.norm_const = 1.0;
  quad::QuadOptions options;
  options.abs_tol = 0.0;
  options.rel_tol = 1e-12;
  const double len = model_length(unit);
  // Integrate in units of the model length so the probe scales fit.
  const auto r = quad::integrate_semi_infinite(
      [&](double x) {
        const double y = shape(unit, x * len);
        return y * y;
      },
      0.0, options);
  const double n_quad = 1.0 / std::sqrt(r.value * len);
  const double n_closed = normalization_constant_closed(unit);
  if (!std::isfinite(n_quad) || !std::isfinite(n_closed)) {
    // Deeply bound oscillator states (beta/sigma beyond about 9) have N ~ Gamma(3/4 - kappa).
    throw NumericalFailure("normalization_constant: N is outside the double range for spectral parameter " +
                               std::to_string(unit.spectral_param),
                           0.0);
  }
  if (!(std::abs(n_quad * n_quad / (n_closed * n_closed) - 1.0) <= kIntegrityTol)) {
    throw IntegrityError("normalization_constant: quadrature N^2 = " + std::to_string(n_quad * n_quad) +
                         " disagrees with closed form " + std::to_string(n_closed * n_closed));
  }
  return n_quad;
}

double eigenfunction_at_origin(const EigenState& state) {
  const double n = state.norm_const;
  const double p = state.spectral_param;
  switch (state.model.kind) {
    case ModelKind::RobinFree:
      return n;
    case ModelKind::CoulombPoint:
      return n * sf::rgamma(1.0 - p);
    case ModelKind::OscillatorPoint:
      return n * kSqrtPi * sf::rgamma(0.75 - p);
  }
  return 0.0;
}

BoundaryValues boundary_values(const EigenState& state) {
  if (state.model.kind == ModelKind::RobinFree) {
    return {state.norm_const, -state.spectral_param * state.norm_const};
  }
  if (state.model.kind == ModelKind::CoulombPoint && !state.model.is_dirichlet()) {
    throw DomainError("boundary_values: phi' diverges logarithmically for a finite-alpha Coulomb state");
  }
  // Cubic least squares in t = r / r_max on geometric points.
  constexpr int kPoints = 16;
  constexpr int kDegree = 3;
  const double len = std::abs(model_length(state));
  const double r_min = 1e-6 * len;
  const double r_max = 1e-3 * len;
  Eigen::MatrixXd a(kPoints, kDegree + 1);
  Eigen::VectorXd y(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (kPoints - 1));
    const double t = r / r_max;
    double p = 1.0;
    for (int d = 0; d <= kDegree; ++d) {
      a(i, d) = p;
      p *= t;
    }
    y(i) = eval_eigenfunction(state, r);
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  return {c(0), c(1) / r_max};
}

}  // namespace hypervirial::models
