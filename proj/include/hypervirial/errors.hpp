#pragma once

#include <stdexcept>
#include <string>

namespace hypervirial {

/// Argument outside the domain of an operation (z <= 0, r <= 0, wrong model kind, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument sits on a pole of the underlying function.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative method ran out of budget. Carries the best error estimate reached.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

/// Two independent routes to the same quantity disagree beyond tolerance.
class IntegrityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hypervirial
