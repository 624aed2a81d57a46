#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chaoskit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A shape or distribution parameter lies outside its admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mixture weights (or a density) do not integrate to one.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMeasureError : public Error {
 public:
  using Error::Error;
};

/// A recurrence procedure produced a non-positive beta coefficient.
class BreakdownError : public Error {
 public:
  using Error::Error;
};

/// Overflow, non-finite values or loss of orthogonality inside a procedure.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// Iterative refinement did not settle; carries the last two iterates.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> previous,
                   std::vector<double> last)
      : Error(what), previous_(std::move(previous)), last_(std::move(last)) {}

  const std::vector<double>& previous() const { return previous_; }
  const std::vector<double>& last() const { return last_; }

 private:
  std::vector<double> previous_;
  std::vector<double> last_;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class EigensolverError : public Error {
 public:
  using Error::Error;
};

class InsufficientCoefficientsError : public Error {
 public:
  using Error::Error;
};

class InvalidEndpointError : public Error {
 public:
  using Error::Error;
};

/// A density-free rule was requested on an unbounded interval.
class TruncationRequiredError : public Error {
 public:
  using Error::Error;
};

/// Non-positive weight in a Gauss-type rule.
class NegativeWeightError : public Error {
 public:
  using Error::Error;
};

class OrderError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure while evaluating moments (e.g. a negative variance).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Integration produced NaN/Inf; `time()` is the step at which it was detected.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaoskit
