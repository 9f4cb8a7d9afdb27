#pragma once

#include <stdexcept>
#include <string>

namespace cartelscreen {

// Input-side failures (bad files, bad config, bad data). The CLI maps these
// to exit code 1; anything else escaping to main is an internal error (2).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : InputError {
  using InputError::InputError;
};

struct SpecError : InputError {
  using InputError::InputError;
};

struct DatasetError : InputError {
  using InputError::InputError;
};

struct JoinError : InputError {
  using InputError::InputError;
};

struct IoError : InputError {
  using InputError::InputError;
};

// Malformed data rows; the message lists offending line numbers.
struct RowError : InputError {
  using InputError::InputError;
};

// Guard against combinatorial blowups (subgroup enumeration cap).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cartelscreen
