#pragma once

#include <stdexcept>
#include <string>

namespace oblot {

/// Caller broke an operation's precondition.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The algorithm needs a sensing capability the scenario does not grant.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A scheduler or movement adversary stepped outside the model's limits.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oblot
