#pragma once

#include <stdexcept>
#include <string>

namespace mlqm {

// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The energy sits inside the exclusion band around omega = 1/2 where the
// Heun parameter map divides by (1 - 2 omega).
class SingularParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

// An iterative evaluation ran out of terms, steps or refinements.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlqm
