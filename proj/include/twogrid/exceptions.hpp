#pragma once

#include <stdexcept>
#include <string>

namespace twogrid {

// Floating-point trouble: non-finite values, failed factorizations,
// Newton stagnation. The CLI maps everything derived from this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OutOfDomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace twogrid
