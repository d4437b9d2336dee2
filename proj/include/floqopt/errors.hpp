#pragma once

#include <stdexcept>
#include <string>

namespace floqopt {

/// Invalid user-facing configuration (bad flag, unknown key, violated precondition).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown, e.g. an eigensolver that did not converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace floqopt
