#pragma once

#include <stdexcept>

namespace metamodel {

/// Base type for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violation of a declaration-level constraint (e.g. s >= 1, o >= 1).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Concrete parameters are internally inconsistent.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A declared structure or operation has no concrete binding.
class BindingError : public Error {
 public:
  using Error::Error;
};

/// Operation applied in the wrong lifecycle regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Rule table lookup hit an undefined entry.
class UndefinedTransitionError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Geometry too small for the requested construction.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Tuple lengths do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested combination is not supported.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Call-level precondition failed.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace metamodel
