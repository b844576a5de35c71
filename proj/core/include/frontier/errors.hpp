#pragma once

#include <stdexcept>
#include <string>

namespace frontier {

// Maps onto CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps onto CLI exit code 3: quadrature failure, NaN/Inf, negativity,
// budget exhaustion, non-monotone iterates.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps onto CLI exit code 4.
class PropertyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frontier
