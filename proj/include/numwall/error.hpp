#pragma once

#include <stdexcept>
#include <string>

namespace numwall {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NotPrime,
  WrongDomain,
  DomainMismatch,
  ZeroInverse,
  DivisionByZero,
  InexactDivision,
  UnstableSeed,
  UnknownName,
  OutOfRange,
  ZeroDivision,
  InternalInconsistency,
  IncompleteFrame,
  TooSmallRegion,
  EffortExhausted,
  OverlapConflict,
  SeedNotStable,
  ReducibleAmbiguity,
};

const char* error_code_name(ErrorCode code);

// Base of every error raised by the library. The code identifies the failure
// class; the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace numwall
