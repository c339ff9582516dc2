#pragma once

#include <stdexcept>
#include <string>

namespace hornfree {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a structural invariant (shape, symmetry, ordering, sizes).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on the input data does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The request is well-formed but too large to evaluate under the active guard.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hornfree
