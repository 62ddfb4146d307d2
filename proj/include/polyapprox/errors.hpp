#pragma once

#include <stdexcept>
#include <string>

namespace polyapprox {

// Error taxonomy. The CLI maps InputError/CapabilityError/ConfigError to
// exit code 2 and NumericalFailure, GeometryError and MissRateError to 3.

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateHullError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Too many unbounded circumscribed draws: the normal density does not
/// positively span. A configuration problem, but reported with exit code 3.
class MissRateError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace polyapprox
