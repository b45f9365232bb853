#include "ompt0/errors.hpp"

namespace ompt0 {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::EmptyDictionary: return "EmptyDictionary";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidCounts: return "InvalidCounts";
    case ErrorKind::ThresholdViolated: return "ThresholdViolated";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ConfigInfeasible: return "ConfigInfeasible";
    case ErrorKind::TheoremGateViolated: return "TheoremGateViolated";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace ompt0
