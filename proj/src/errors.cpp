#include "liouville/errors.hpp"

namespace liouville {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MultipleExtrema: return "MultipleExtrema";
    case ErrorCode::DegenerateExtremum: return "DegenerateExtremum";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::NotAZero: return "NotAZero";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::RationalInput: return "RationalInput";
    case ErrorCode::InsufficientRange: return "InsufficientRange";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::IndexingAmbiguity: return "IndexingAmbiguity";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::NoRegionConsistent: return "NoRegionConsistent";
    case ErrorCode::DegenerateIndex: return "DegenerateIndex";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace liouville
