#pragma once

#include <stdexcept>
#include <string>

namespace gmeopt {

// Malformed data handed to a constructor or operation: bad dimensions,
// non-finite entries, inconsistent bounds.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar parameter outside its admissible range, or an operator kind a
// routine cannot accept.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested outside the domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative routine exhausted its iteration budget. Carries the best
// value seen so far so diagnostics can still report something useful.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best)
      : std::runtime_error(what), best_value(best) {}
  double best_value;
};

// A materialization or allocation beyond the configured budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The solver metric's quadratic form came out negative: the step
// parameters are inconsistent with the problem.
class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gmeopt
