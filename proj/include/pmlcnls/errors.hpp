#pragma once

#include <stdexcept>
#include <string>

namespace pmlcnls {

/// Invalid input or configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver failure, divergence or non-finite state. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmlcnls
