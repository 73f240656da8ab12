#pragma once

#include <stdexcept>
#include <string>

namespace gmol {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or iteration did not reach the requested tolerance within its cap.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// A result is not representable (e.g. a survival probability underflowed).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A requested moment does not exist for the given shape parameter.
class MomentError : public Error {
 public:
  using Error::Error;
};

/// An objective or likelihood produced a non-finite value where one was required.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// The optimizer could not start or failed outright.
class OptimizerError : public Error {
 public:
  using Error::Error;
};

/// Observation containers that violate their invariants.
class DesignError : public Error {
 public:
  using Error::Error;
};

/// Censoring-bound calibration could not bracket its target.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Two fits that cannot be compared (identical per-observation densities).
class DegenerateComparisonError : public Error {
 public:
  using Error::Error;
};

/// A nested fit reached a higher likelihood than the model containing it.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmol
