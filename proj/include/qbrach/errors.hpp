#pragma once

#include <stdexcept>
#include <string>

namespace qbrach {

// Invalid or inconsistent caller input (bad dimensions, malformed files,
// violated preconditions). Maps to CLI exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical contract was violated (residual too large, lost orthogonality).
// Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qbrach
