#pragma once

#include <stdexcept>
#include <string>

namespace magnus {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Bad caller input (empty step, unknown id, malformed vector, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition did not hold. `magnitude()` reports the
/// measured defect that violated it (anti-Hermiticity, norm, divisibility).
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double magnitude)
      : Error(what), magnitude_(magnitude) {}

  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

/// Structured-text input could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Parsed input violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace magnus
