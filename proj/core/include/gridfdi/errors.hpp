#pragma once

#include <stdexcept>
#include <string>

namespace gridfdi {

/// Malformed case-file text. The message carries the offending key or
/// array index so the locus can be reported to the user.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally invalid case: dangling bus reference, duplicate slack,
/// nonpositive inertia, and friends. Names the offending entity.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: singular matrix, conditioning floor violated,
/// eigensolver non-convergence.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A power flow that must converge did not (base-case analysis).
class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace gridfdi
