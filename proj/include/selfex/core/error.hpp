#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace selfex {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteState,
  IncompatibleDrift,
  NoConvergence,
  CflViolation,
  DomainOverflow,
  DegenerateParams,
  DegenerateInput,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Carries the index of the step whose update produced a NaN or infinity.
class NonFiniteState : public Error {
 public:
  NonFiniteState(std::uint64_t step, const std::string& what)
      : Error(ErrorCode::NonFiniteState, what), step_(step) {}

  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace selfex
