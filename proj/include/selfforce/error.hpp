#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace selfforce {

enum class ErrorCode {
  SuperluminalInitialVelocity,
  NonPositiveMass,
  NonPositiveSpeed,
  ZeroCoupling,
  NegativeSigma,
  NonFiniteParameter,
  InvalidTrajectory,
  OutOfRange,
  NonConvergence,
  UndefinedAtKink,
  HorizonExceeded,
  CflViolation,
  SourceUnderresolved,
  SuperluminalVelocity,
  BoundaryContact,
  InsufficientSamples,
  InvalidWindow,
  InvalidLadder,
  UnknownKey,
  MissingKey,
  TypeError,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this type; `code()` lets
/// callers and tests dispatch on the failure kind without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace selfforce
