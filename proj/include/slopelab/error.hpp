#pragma once

#include <stdexcept>
#include <string>

namespace slopelab {

/// Precondition violated by the caller (bad argument, point outside the domain).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies on the branch cut of a principal power.
class BranchCutError : public DomainError {
 public:
  BranchCutError() : DomainError("branch cut") {}
  using DomainError::DomainError;
};

/// A runtime invariant failed during numerical work (rounding, overflow,
/// non-convergence).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or input file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slopelab
