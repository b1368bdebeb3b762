#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

enum class ErrorCode {
  InvalidConfig,
  MultipleExtrema,
  DegenerateExtremum,
  OutOfRange,
  SingularPoint,
  NotAZero,
  PrecisionExhausted,
  Overflow,
  RationalInput,
  InsufficientRange,
  InsufficientData,
  ZeroFrequency,
  NoConvergence,
  NoBracket,
  IndexingAmbiguity,
  NotPositive,
  Truncated,
  NoRegionConsistent,
  DegenerateIndex,
};

const char* to_string(ErrorCode code) noexcept;

/** Every failure raised by the library carries one of the codes above. */
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace liouville
