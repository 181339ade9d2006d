#pragma once

#include <stdexcept>
#include <string>

namespace ffire {

/// Argument outside the mathematical domain of a function (poles, t >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Request would exceed a configured resource budget (precision bits,
/// sample counts, exact-arithmetic sizes).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Empty sample set or zero-sized request.
class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative scheme failed to meet its tolerance. Carries what it reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

}  // namespace ffire
