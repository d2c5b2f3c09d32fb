#pragma once

#include <stdexcept>
#include <string>

namespace nilspherical {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised for inputs outside a function's domain, e.g. a multi-index that is
// shorter than the block structure or a zero central frequency.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nilspherical
