#pragma once

#include <stdexcept>
#include <string>

namespace nlqk {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied parameters that violate a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A nonlocality function cannot supply moments up to the requested order.
class MomentsUnavailable : public Error {
 public:
  using Error::Error;
};

class CharacteristicFunctionUnavailable : public Error {
 public:
  using Error::Error;
};

/// Grid or function-domain failure (domain too small, log argument out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Kernel mass at the outermost grid cells exceeds the tail threshold.
class BoundaryMassError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NumericalInstability : public Error {
 public:
  using Error::Error;
};

}  // namespace nlqk
