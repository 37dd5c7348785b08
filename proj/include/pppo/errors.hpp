#pragma once

#include <stdexcept>
#include <string>

namespace pppo {

// Invalid configuration values (bad cutoff, tau <= 0, malformed config files, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Dimension / arity / index mismatches.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Gate parameters outside their configured safety limits.
class GateDomainError : public std::domain_error {
 public:
  explicit GateDomainError(const std::string& what) : std::domain_error(what) {}
};

// Numerical degeneracy (zero-norm states, non-finite values).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pppo
