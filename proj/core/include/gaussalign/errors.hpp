#pragma once

#include <stdexcept>
#include <string>

namespace gaussalign {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed, non-finite, or otherwise unusable input values.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Empty sample set or empty collection where at least one element is required.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// Incompatible matrix/vector shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Matrix failed a positive-semidefiniteness requirement.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// Matrix required to be invertible is numerically singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Input is valid in general but not supported by this operation
/// (e.g. uncentered measures where a centered closed form is required).
class UnsupportedInputError : public Error {
 public:
  using Error::Error;
};

/// Iterate handed to a manifold solver violates the manifold constraints.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Iterative scheme exhausted its budget; carries the last residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}

  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace gaussalign
