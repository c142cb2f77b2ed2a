#pragma once

#include <stdexcept>
#include <string>

namespace bcsgap {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid inputs, malformed configs, or couplings that violate the standing
// assumptions of the model.
struct ConfigError : Error {
  using Error::Error;
};

struct NonPositiveInput : ConfigError {
  using ConfigError::ConfigError;
};

struct CouplingOrder : ConfigError {
  using ConfigError::ConfigError;
};

struct OutOfDomain : ConfigError {
  using ConfigError::ConfigError;
};

struct OutOfRange : ConfigError {
  using ConfigError::ConfigError;
};

struct DegenerateBand : ConfigError {
  using ConfigError::ConfigError;
};

// A sampled potential value left the declared [U1, U2] band.
struct BoundViolation : ConfigError {
  BoundViolation(const std::string& msg, double x_, double xi_, double value_)
      : ConfigError(msg), x(x_), xi(xi_), value(value_) {}
  double x;
  double xi;
  double value;
};

// U2 * a >= 1: the chosen upper coupling breaks the construction that the
// Lipschitz constant gamma rests on. Never clamped to a feasible value.
struct InfeasibleCoupling : ConfigError {
  InfeasibleCoupling(const std::string& msg, double u2_, double a_)
      : ConfigError(msg), u2(u2_), a(a_) {}
  double u2;
  double a;
};

// Numerical failures that can occur at runtime even for valid configs.
struct NumericalError : Error {
  using Error::Error;
};

struct MaxSubdivisions : NumericalError {
  using NumericalError::NumericalError;
};

struct BracketFailure : NumericalError {
  using NumericalError::NumericalError;
};

struct UndefinedLimit : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace bcsgap
