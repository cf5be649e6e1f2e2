#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace haarquench {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  NegativeEigenvalue,
  InvalidMask,
  DimMismatch,
  NonPositive,
  TooFewSamples,
  ZeroVector,
  InvalidTarget,
  InvalidArgument,
  OutOfRange,
  InfeasibleDetected,
  SolverFailure,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for every recoverable failure in the library.
/// The code lets callers branch (e.g. resample on ZeroVector) without
/// parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace haarquench
