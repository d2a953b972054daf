#include "selfex/core/error.hpp"

namespace selfex {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::IncompatibleDrift: return "IncompatibleDrift";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::DomainOverflow: return "DomainOverflow";
    case ErrorCode::DegenerateParams: return "DegenerateParams";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace selfex
