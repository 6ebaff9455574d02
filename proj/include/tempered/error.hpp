#pragma once

#include <stdexcept>
#include <string>

namespace tempered {

// Invalid argument or parameter outside the model's support.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed (no bracket, non-convergence, singular matrix).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The data cannot support the requested fit, e.g. all excesses tied.
class DegenerateError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Unusable user input: missing file, unparsable column, no valid windows.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tempered
