#pragma once

#include <stdexcept>
#include <string>

namespace lagro {

/// Malformed input: dimension mismatch, schema violation, bad argument.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (e.g. lambda < 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A precondition expressed as a mathematical condition does not hold.
class ConditionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration, restart or enumeration cap was exceeded.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested first-stage decision (or every decision) is robust-infeasible.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lagro
