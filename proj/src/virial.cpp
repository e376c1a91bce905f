#include "hypervirial/virial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hypervirial/quad.hpp"
#include "hypervirial/specfun.hpp"

namespace hypervirial::virial {

namespace sf = hypervirial::specfun;
using models::ModelKind;

namespace {

constexpr double kParamStep = 1e-5;

quad::QuadOptions tight() {
  quad::QuadOptions o;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-12;
  return o;
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

// Least-squares coefficients of y against the given basis columns.
Eigen::VectorXd fit(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<std::function<double(double)>>& basis) {
  const int rows = static_cast<int>(x.size());
  const int cols = static_cast<int>(basis.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      a(i, j) = basis[j](x[i]);
    }
    b(i) = y[i];
  }
  return a.colPivHouseholderQr().solve(b);
}

double log_slope(const std::vector<double>& eps, const std::vector<double>& column) {
  using F = std::function<double(double)>;
  std::vector<F> basis = {[](double) { return 1.0; }, [](double e) { return std::log(e); }};
  if (eps.size() >= 4) {
    basis.push_back([](double e) { return e * std::log(e); });
    basis.push_back([](double e) { return e; });
  } else if (eps.size() == 3) {
    basis.push_back([](double e) { return e; });
  }
  return fit(eps, column, basis)(1);
}

double extrapolate(const std::vector<double>& eps, const std::vector<double>& column) {
  using F = std::function<double(double)>;
  // combination - 2E = -2E int_0^eps phi^2, which has no eps ln eps term.
  const std::vector<F> terms = {[](double) { return 1.0; }, [](double e) { return e; },
                                [](double e) { return e * e * std::log(e); }, [](double e) { return e * e; }};
  const std::size_t used = std::min(terms.size(), eps.size());
  return fit(eps, column, std::vector<F>(terms.begin(), terms.begin() + used))(0);
}

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("cutoff eps must be positive and finite");
  }
}

}  // namespace

double anomaly_boundary_term(double phi0, double dphi0, const PhysicalScales& scales, Generator generator) {
  const double c = scales.hbar * scales.hbar / scales.mass;
  return generator == Generator::Scale1D ? 0.5 * c * phi0 * dphi0 : 0.25 * c * phi0 * dphi0;
}

double anomaly_oscillator_closed(const EigenState& state) {
  if (state.model.kind != ModelKind::OscillatorPoint) {
    throw DomainError("anomaly_oscillator_closed: oscillator state required");
  }
  if (state.model.is_dirichlet()) {
    return 0.0;
  }
  const auto& s = state.model.scales;
  const double n2 = state.norm_const * state.norm_const;
  const double k = state.spectral_param;
  return -n2 * std::numbers::pi * s.sigma() * s.hbar * s.hbar / (2.0 * s.mass) * sf::rgamma(0.75 - k) *
         sf::rgamma(0.25 - k);
}

double anomaly_coulomb_regularized(const EigenState& state, double eps) {
  if (state.model.kind != ModelKind::CoulombPoint) {
    throw DomainError("anomaly_coulomb_regularized: Coulomb state required");
  }
  require_eps(eps);
  const auto& s = state.model.scales;
  if (state.model.is_dirichlet()) {
    // phi(0) = 0 and phi'(0) finite: the boundary functional tends to zero.
    return 0.0;
  }
  const double xi = s.xi();
  const double phi0 = models::eigenfunction_at_origin(state);
  const double alpha = state.model.extension_value();
  return -s.kinetic_prefactor() * phi0 * phi0 * (xi * std::log(std::abs(xi) * eps) + 2.0 * xi + alpha);
}

double anomaly_cutoff_boundary(const EigenState& state, double eps) {
  require_eps(eps);
  const models::Jet j = models::eigenfunction_jet(state, eps);
  const double b = j.value * j.d1 + eps * (j.value * j.d2 - j.d1 * j.d1);
  return state.model.scales.kinetic_prefactor() * b;
}

double anomaly_bulk_integral(const JetFunction& f, const PhysicalScales& scales, Generator generator,
                             double eps, const std::vector<double>& breakpoints) {
  if (!(eps >= 0.0)) {
    throw DomainError("anomaly_bulk_integral: eps must be >= 0");
  }
  const quad::Integrand g = [&f](double x) {
    const models::Jet j = f(x);
    return -x * j.value * j.d3 - 2.0 * j.value * j.d2 + x * j.d1 * j.d2;
  };
  std::vector<double> cuts;
  for (double b : breakpoints) {
    if (b > eps) {
      cuts.push_back(b);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const quad::QuadOptions options = tight();
  double total = 0.0;
  double lo = eps;
  for (double b : cuts) {
    total += eps > 0.0 && lo == eps ? quad::integrate_cutoff(g, lo, b, options).value
                                    : quad::integrate(g, lo, b, options).value;
    lo = b;
  }
  total += lo > 0.0 && lo == eps ? quad::integrate_cutoff(g, lo, quad::infinity, options).value
                                 : quad::integrate_semi_infinite(g, lo, options).value;
  const double factor = generator == Generator::Scale1D ? 1.0 : 0.5;
  return factor * scales.kinetic_prefactor() * total;
}

double anomaly_bulk_integral(const EigenState& state, Generator generator, double eps) {
  const double len = std::abs(model_length(state));
  return anomaly_bulk_integral([&state](double r) { return models::eigenfunction_jet(state, r); },
                               state.model.scales, generator, eps, {len, 4.0 * len});
}

double potential_expectation(const EigenState& state, Method method, std::optional<double> eps) {
  const auto& s = state.model.scales;
  const double n2 = state.norm_const * state.norm_const;
  const double p = state.spectral_param;
  switch (state.model.kind) {
    case ModelKind::RobinFree:
      return 0.0;

    case ModelKind::OscillatorPoint: {
      if (method == Method::ClosedForm) {
        const double sigma = s.sigma();
        return sigma * sigma * s.hbar * s.hbar * p / s.mass +
               n2 * std::numbers::pi * sigma * s.hbar * s.hbar / (4.0 * s.mass) * sf::rgamma(0.75 - p) *
                   sf::rgamma(0.25 - p);
      }
      const double len = model_length(state);
      const auto r = quad::integrate_semi_infinite(
          [&](double x) {
            const double r_phys = x * len;
            const double phi = models::eval_eigenfunction(state, r_phys);
            return phi * phi * models::potential(state.model, r_phys);
          },
          0.0, tight());
      return r.value * len;
    }

    case ModelKind::CoulombPoint: {
      const bool dirichlet = state.model.is_dirichlet();
      if (!dirichlet && !eps) {
        throw DomainError("potential_expectation: Coulomb state with finite alpha needs a cutoff eps");
      }
      if (eps) {
        require_eps(*eps);
      }
      const double k = *s.coupling_k;
      const double xi = s.xi();
      if (method == Method::ClosedForm) {
        const double rg = sf::rgamma(1.0 - p);
        const double log_part = dirichlet ? 0.0 : rg * rg * (std::log(xi * *eps / p) + 2.0 * sf::euler_gamma);
        return -n2 * k * (log_part - p * sf::trigamma_rgamma2(1.0 - p) + rg * sf::digamma_rgamma(1.0 - p));
      }
      // Integrate in z = xi r / lambda, where <k/r> = N^2 k int W(z)^2 / z dz.
      const auto integrand = [p](double z) {
        const double w = sf::whittaker_w(p, 0.5, z).value;
        return w * w / z;
      };
      const double z_eps = eps ? xi * *eps / p : 0.0;
      const double integral = z_eps > 0.0 ? quad::integrate_cutoff(integrand, z_eps, quad::infinity, tight()).value
                                          : quad::integrate_semi_infinite(integrand, 0.0, tight()).value;
      return n2 * k * integral;
    }
  }
  return 0.0;
}

double robin_kinetic_quadrature(const EigenState& state) {
  if (state.model.kind != ModelKind::RobinFree) {
    throw DomainError("robin_kinetic_quadrature: RobinFree state required");
  }
  const double alpha = state.spectral_param;
  const auto r = quad::integrate_semi_infinite(
      [&](double x) {
        const double d = models::eval_eigenfunction_dr(state, x);
        return d * d;
      },
      0.0, tight());
  const double phi0 = models::eigenfunction_at_origin(state);
  return state.model.scales.kinetic_prefactor() * (r.value - alpha * phi0 * phi0);
}

Antiderivative whittaker_antiderivative(double mu, std::pair<double, double> kappas, double x) {
  if (!(x > 0.0)) {
    throw DomainError("whittaker_antiderivative: x must be positive");
  }
  const auto [k1, k2] = kappas;
  auto w = [mu, x](double k) { return sf::whittaker_w(k, mu, x).value; };
  auto dw = [mu, x](double k) { return sf::whittaker_w_dz(k, mu, x).value; };
  if (k1 != k2) {
    return {(w(k1) * dw(k2) - dw(k1) * w(k2)) / (k1 - k2), AntiderivativeRoute::Wronskian};
  }
  auto central = [&](const std::function<double(double)>& g, double h) {
    return (g(k1 + h) - g(k1 - h)) / (2.0 * h);
  };
  auto richardson = [&](const std::function<double(double)>& g) {
    const double coarse = central(g, kParamStep);
    const double fine = central(g, 0.5 * kParamStep);
    return (4.0 * fine - coarse) / 3.0;
  };
  const double dw_dk = richardson(w);
  const double ddw_dk = richardson(dw);
  return {-(w(k1) * ddw_dk - dw(k1) * dw_dk), AntiderivativeRoute::ParameterLimit};
}

std::vector<double> default_eps_schedule() { return {1e-2, 1e-3, 1e-4, 1e-5}; }

CutoffStudy coulomb_cutoff_study(const EigenState& state, const std::vector<double>& eps_schedule) {
  if (state.model.kind != ModelKind::CoulombPoint || state.model.is_dirichlet()) {
    throw DomainError("coulomb_cutoff_study: finite-alpha Coulomb state required");
  }
  if (eps_schedule.empty()) {
    throw DomainError("coulomb_cutoff_study: empty eps schedule");
  }
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    require_eps(eps_schedule[i]);
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) {
      throw DomainError("coulomb_cutoff_study: eps schedule must be strictly decreasing");
    }
  }
  CutoffStudy study;
  study.epsilons = eps_schedule;
  study.target = 2.0 * state.energy;
  for (double eps : eps_schedule) {
    const double a = anomaly_cutoff_boundary(state, eps);
    const double v = potential_expectation(state, Method::Quadrature, eps);
    study.anomaly_eps.push_back(a);
    study.potential_eps.push_back(v);
    study.combination.push_back(a - v);
    study.anomaly_closed_eps.push_back(anomaly_coulomb_regularized(state, eps));
    study.potential_closed_eps.push_back(potential_expectation(state, Method::ClosedForm, eps));
  }
  const auto& e = study.epsilons;
  if (e.size() >= 2) {
    study.anomaly_log_slope = log_slope(e, study.anomaly_eps);
    study.potential_log_slope = log_slope(e, study.potential_eps);
  }
  study.extrapolated = extrapolate(e, study.combination);
  if (e.size() >= 2) {
    std::vector<double> log_err;
    std::vector<double> log_eps;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double err = std::abs(study.combination[i] - study.target);
      if (err > 0.0) {
        log_err.push_back(std::log(err));
        log_eps.push_back(std::log(e[i]));
      }
    }
    if (log_err.size() >= 2) {
      study.observed_rate = fit(log_eps, log_err, {[](double) { return 1.0; }, [](double t) { return t; }})(1);
    }
  }
  return study;
}

VerifyResult verify(const EigenState& state, const VerifyOptions& options) {
  const auto& s = state.model.scales;
  const bool closed = options.method == Method::ClosedForm;
  const bool quadrature = options.method == Method::Quadrature;
  VirialReport report;
  report.energy = state.energy;
  report.method = options.method;
  switch (state.model.kind) {
    case ModelKind::RobinFree: {
      const double phi0 = models::eigenfunction_at_origin(state);
      report.potential = 0.0;
      report.kinetic = closed ? state.energy : robin_kinetic_quadrature(state);
      report.anomaly = quadrature ? anomaly_bulk_integral(state, Generator::Scale1D)
                                  : anomaly_boundary_term(phi0, -state.spectral_param * phi0, s, Generator::Scale1D);
      report.residual = 2.0 * report.kinetic - report.anomaly;
      return report;
    }
    case ModelKind::OscillatorPoint: {
      report.potential = potential_expectation(state, closed ? Method::ClosedForm : Method::Quadrature);
      if (quadrature) {
        const auto bv = models::boundary_values(state);
        report.anomaly = anomaly_boundary_term(bv.value, bv.derivative, s, Generator::Scale3D);
      } else {
        report.anomaly = anomaly_oscillator_closed(state);
      }
      report.kinetic = state.energy - report.potential;
      report.residual = 2.0 * report.potential + report.anomaly - state.energy;
      return report;
    }
    case ModelKind::CoulombPoint: {
      if (!state.model.is_dirichlet()) {
        return coulomb_cutoff_study(state,
                                    options.eps_schedule.empty() ? default_eps_schedule() : options.eps_schedule);
      }
      const double k_over_r = potential_expectation(state, closed ? Method::ClosedForm : Method::Quadrature);
      report.anomaly = 0.0;
      report.potential = -k_over_r;
      report.kinetic = state.energy - report.potential;
      report.residual = report.anomaly - k_over_r - 2.0 * state.energy;
      return report;
    }
  }
  return report;
}

}  // namespace hypervirial::virial
