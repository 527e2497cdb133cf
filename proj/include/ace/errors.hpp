#pragma once

#include <stdexcept>
#include <string>

namespace ace {

// Caller broke a documented precondition (dimension mismatch, bad range).
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input data is malformed (bad CSV cell, ragged rows, zero vectors).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Delete of an item the sketch never saw (some target counter is zero).
struct InconsistentDelete : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation not available under the current configuration.
struct UnsupportedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ace
