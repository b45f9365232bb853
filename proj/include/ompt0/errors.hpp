#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ompt0 {

enum class ErrorKind {
  RankDeficient,
  EigenFailure,
  EmptyDictionary,
  DimensionMismatch,
  BudgetExceeded,
  InvalidCounts,
  ThresholdViolated,
  PreconditionViolated,
  SelfCheckFailed,
  ZeroVector,
  ConfigInfeasible,
  TheoremGateViolated,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. The kind is the machine-readable part; the
/// message names the stage that failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ompt0
