#pragma once

#include <stdexcept>
#include <string>

namespace conic_lab {

// Precondition violations: bad moduli, non-unit coefficients, points that do
// not solve the congruence they were passed in for.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The closed-form machinery does not cover this input (multiple critical
// point, derivative valuation too large, degenerate discriminant).
class UnsupportedCase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds the configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conic_lab
