#pragma once

#include <stdexcept>
#include <string>

namespace clab {

// Bad user input: malformed JSON/CSV, invalid parameter files, unknown tags.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: diverging integration, failed eigensolve, non-finite data.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested check ran to completion and did not pass.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace clab
