#pragma once

#include <stdexcept>
#include <string>

namespace qplanar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension, degree or variance.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Zero or otherwise degenerate input where a nonzero value is required.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A vector outside the generic set of an affinor family.
class GenericSetViolation : public Error {
 public:
  using Error::Error;
};

/// P(X,X) does not lie in the hull A(X).
class NotInHull : public Error {
 public:
  using Error::Error;
};

/// A structure fails the generic rank test required by an operation.
class GenericRankFailure : public Error {
 public:
  using Error::Error;
};

/// A map sampled as a quadratic form is not quadratic.
class NonQuadratic : public Error {
 public:
  using Error::Error;
};

/// Two independent computational routes disagree.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the domain of a curve (e.g. a boundary node of a sampled curve).
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// ODE state became non-finite.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

/// Invalid user configuration (bad flags, violated scenario preconditions).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qplanar
