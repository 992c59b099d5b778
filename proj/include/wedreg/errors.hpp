#pragma once

#include <stdexcept>
#include <string>

namespace wedreg {

// Invalid user-supplied parameters (grid sizes, eps, CFL, config values).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Array or vector sizes that do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Arguments outside the domain of an operation (e.g. t outside [0, T]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Non-finite objective, diverging Newton iteration, factorization failure.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wedreg
