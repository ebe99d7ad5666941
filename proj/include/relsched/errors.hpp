#pragma once

#include <stdexcept>
#include <string>

namespace relsched {

enum class ErrorCode {
  NonPositiveSize,
  NonPositiveSpeed,
  EmptyJobs,
  EmptyMachines,
  DuplicateMachineId,
  InvalidPrecision,
  RangeEmpty,
  EmptyRange,
  OversizedJob,
  KeyMismatch,
  InsufficientPopulation,
  NoFeasiblePath,
  SumMismatch,
  NotFNFICompatible,
  PartitionInvalid,
  BudgetExceeded,
  ExactPowerUnsupported,
  UnboundedH,
  UnknownAgent,
  ParseError,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace relsched
