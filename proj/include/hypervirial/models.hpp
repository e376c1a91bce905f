#pragma once

// The three point-interaction systems: the free particle on the half-line
// with a Robin condition, the s-wave Coulomb problem and the s-wave
// isotropic oscillator, each labelled by its self-adjoint-extension
// parameter. Wave functions are reduced radial functions phi = r psi,
// square-integrable on [0, inf) with the flat measure.

#include <optional>
#include <variant>
#include <vector>

#include "hypervirial/errors.hpp"

namespace hypervirial::models {

/// hbar, mass and either the Coulomb strength k or the oscillator frequency omega.
struct PhysicalScales {
  double hbar = 1.0;
  double mass = 1.0;
  std::optional<double> coupling_k;
  std::optional<double> omega;

  static PhysicalScales free(double hbar = 1.0, double mass = 1.0);
  static PhysicalScales coulomb(double hbar, double mass, double k);
  /// hbar = m = 1 and k = xi / 2.
  static PhysicalScales coulomb_xi(double xi);
  static PhysicalScales oscillator(double hbar, double mass, double omega);
  /// hbar = m = 1 and omega = sigma^2.
  static PhysicalScales oscillator_sigma(double sigma);

  /// xi = 2 m k / hbar^2.
  double xi() const;
  /// sigma = sqrt(m omega / hbar).
  double sigma() const;
  /// hbar^2 / 2m.
  double kinetic_prefactor() const { return hbar * hbar / (2.0 * mass); }

  void validate() const;
};

/// Extension parameter sent to -infinity with phi(0) -> 0. Never encoded as a big number.
struct DirichletLimit {
  bool operator==(const DirichletLimit&) const = default;
};

using Extension = std::variant<double, DirichletLimit>;

enum class ModelKind { RobinFree, CoulombPoint, OscillatorPoint };

struct ModelSpec {
  ModelKind kind = ModelKind::RobinFree;
  /// alpha for RobinFree and CoulombPoint, beta for OscillatorPoint.
  Extension extension = 1.0;
  PhysicalScales scales;

  static ModelSpec robin_free(double alpha, PhysicalScales scales = PhysicalScales::free());
  static ModelSpec coulomb(Extension alpha, PhysicalScales scales);
  static ModelSpec oscillator(Extension beta, PhysicalScales scales);

  bool is_dirichlet() const { return std::holds_alternative<DirichletLimit>(extension); }
  /// The finite extension parameter; throws DomainError in the Dirichlet limit.
  double extension_value() const;
  /// alpha/xi (Coulomb), beta/sigma (oscillator), alpha (RobinFree).
  double extension_ratio() const;
};

struct EigenState {
  /// Branch n: the interval between the n-th and (n+1)-th pole of the
  /// eigenvalue function, the interval before the first pole being 0.
  int branch = 0;
  /// lambda_n (Coulomb), kappa_n (oscillator), alpha (RobinFree).
  double spectral_param = 0.0;
  double energy = 0.0;
  double norm_const = 1.0;
  ModelSpec model;
};

/// F_C(lambda) = Psi(1-lambda) - ln|lambda| + 1/(2 lambda) + 2 gamma - 1.
/// Throws PoleError at lambda = 0, 1, 2, ...
double f_coulomb(double lambda);

/// F_H(kappa) = Gamma(3/4-kappa)/Gamma(1/4-kappa). Throws PoleError at kappa = 3/4 + n.
double f_harmonic(double kappa);

/// Bound state on one branch. nullopt when the branch carries no root
/// (xi < 0 with alpha/xi >= 2 gamma - 1, or any branch > 0 for xi < 0).
std::optional<EigenState> solve_coulomb_branch(const ModelSpec& spec, int branch);
std::vector<EigenState> solve_coulomb_eigenvalues(const ModelSpec& spec, int n_max);

EigenState solve_oscillator_branch(const ModelSpec& spec, int branch);
std::vector<EigenState> solve_oscillator_eigenvalues(const ModelSpec& spec, int n_max);

EigenState robin_free_eigenstate(const ModelSpec& spec);

/// Normalized reduced radial function phi(r), r > 0.
double eval_eigenfunction(const EigenState& state, double r);
double eval_eigenfunction_dr(const EigenState& state, double r);

/// phi and its first three r-derivatives; the second and third come from
/// the radial equation phi'' = (2m/hbar^2)(V - E) phi.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};
Jet eigenfunction_jet(const EigenState& state, double r);

/// V(r) and V'(r) of the model (zero for RobinFree).
double potential(const ModelSpec& spec, double r);
double potential_dr(const ModelSpec& spec, double r);

/// N from the quadrature of the unnormalized function, cross-checked against
/// the closed form. Throws IntegrityError if the two differ by more than 1e-6.
double normalization_constant(const EigenState& state);
double normalization_constant_closed(const EigenState& state);

/// phi(0) from the small-r behaviour of the closed form (0 in the Dirichlet limit).
double eigenfunction_at_origin(const EigenState& state);

struct BoundaryValues {
  double value = 0.0;
  double derivative = 0.0;
};
/// phi(0+) and phi'(0+). RobinFree is exact; the oscillator and the Coulomb
/// Dirichlet limit use a one-sided cubic fit to phi on r in [1e-6, 1e-3]
/// times the model length. Finite-alpha Coulomb states have a logarithmic
/// phi' and raise DomainError.
BoundaryValues boundary_values(const EigenState& state);

}  // namespace hypervirial::models
