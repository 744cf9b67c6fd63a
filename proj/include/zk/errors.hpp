#pragma once

#include <stdexcept>
#include <string>

namespace zk {

// Bad user-supplied configuration (grid sizes, parameter ranges, file format).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal consistency violation (broken Hermitian symmetry, grid mismatch).
struct IntegrityError : std::runtime_error {
  explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite value produced by a numeric kernel.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Nonlinear blow-up during time stepping; carries the time of the last good state.
struct BlowUpError : std::runtime_error {
  double t_last_good;
  BlowUpError(const std::string& msg, double t)
      : std::runtime_error(msg), t_last_good(t) {}
};

}  // namespace zk
