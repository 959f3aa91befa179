#pragma once

#include <stdexcept>
#include <string>

namespace poisson_chaos {

/// Caller broke a documented precondition (shape mismatch, parameter out of range).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested arity or order exceeds the dense-storage caps.
class UnsupportedArity : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A functional produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact enumeration would exceed the configured state limit.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation needs information the input cannot supply (e.g. a mean for an opaque functional).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace poisson_chaos
