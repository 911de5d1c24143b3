#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jb {

enum class ErrorCode {
  DepthExceeded,
  EmptyCoreSet,
  ResolutionTooCoarse,
  SingularPoint,
  CertificateViolation,
  OutOfDomain,
  DegenerateRange,
  UnsupportedSource,
  CalibrationOutOfRange,
  ScaleUnderflow,
  DegenerateCarrier,
  GrowthViolation,
  CurveEscape,
  InequalityViolation,
  NonIntegrableConfiguration,
  InvalidConfig,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (tests, the CLI) can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jb
