#include "jb/error.hpp"

namespace jb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::EmptyCoreSet: return "EmptyCoreSet";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::CertificateViolation: return "CertificateViolation";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::UnsupportedSource: return "UnsupportedSource";
    case ErrorCode::CalibrationOutOfRange: return "CalibrationOutOfRange";
    case ErrorCode::ScaleUnderflow: return "ScaleUnderflow";
    case ErrorCode::DegenerateCarrier: return "DegenerateCarrier";
    case ErrorCode::GrowthViolation: return "GrowthViolation";
    case ErrorCode::CurveEscape: return "CurveEscape";
    case ErrorCode::InequalityViolation: return "InequalityViolation";
    case ErrorCode::NonIntegrableConfiguration: return "NonIntegrableConfiguration";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace jb
