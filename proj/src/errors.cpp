#include "relsched/errors.hpp"

namespace relsched {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveSize: return "NonPositiveSize";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::EmptyJobs: return "EmptyJobs";
    case ErrorCode::EmptyMachines: return "EmptyMachines";
    case ErrorCode::DuplicateMachineId: return "DuplicateMachineId";
    case ErrorCode::InvalidPrecision: return "InvalidPrecision";
    case ErrorCode::RangeEmpty: return "RangeEmpty";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::OversizedJob: return "OversizedJob";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::InsufficientPopulation: return "InsufficientPopulation";
    case ErrorCode::NoFeasiblePath: return "NoFeasiblePath";
    case ErrorCode::SumMismatch: return "SumMismatch";
    case ErrorCode::NotFNFICompatible: return "NotFNFICompatible";
    case ErrorCode::PartitionInvalid: return "PartitionInvalid";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ExactPowerUnsupported: return "ExactPowerUnsupported";
    case ErrorCode::UnboundedH: return "UnboundedH";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace relsched
