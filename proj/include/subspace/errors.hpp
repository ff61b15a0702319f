#pragma once

#include <stdexcept>
#include <string>

namespace subspace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix shapes do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf input or a factorization that failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument (count, tolerance, weight) is out of range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input violates a mathematical precondition (negative weights, asymmetry).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Dataset-level problems: missing classes, impossible splits, bad config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV or configuration text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace subspace
