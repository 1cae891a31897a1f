#pragma once

#include <stdexcept>
#include <string>

namespace oscillabound {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed data, violated preconditions, dependent families.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A finite-precision representation cannot resolve the requested value.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature gave up. Carries the best available estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial, double error_estimate)
      : Error(what), partial_(partial), error_estimate_(error_estimate) {}
  double partial() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

/// A certificate or mathematical guarantee was contradicted by a computation.
/// This always indicates a bug; the CLI maps it to exit code 2.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace oscillabound
