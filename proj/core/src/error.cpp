#include "distq/error.hpp"

namespace distq {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidLevels: return "InvalidLevels";
    case ErrorKind::InfeasibleCandidate: return "InfeasibleCandidate";
    case ErrorKind::ConfigDomainMismatch: return "ConfigDomainMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::UnboundedCurvature: return "UnboundedCurvature";
    case ErrorKind::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorKind::DegenerateResponse: return "DegenerateResponse";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotAMaximum: return "NotAMaximum";
    case ErrorKind::SpectrumUnderflow: return "SpectrumUnderflow";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidLevels:
    case ErrorKind::InfeasibleCandidate:
    case ErrorKind::ConfigDomainMismatch:
    case ErrorKind::TooLarge:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorKind kind, std::string where, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " in " + where + ": " + detail),
      kind_(kind),
      where_(std::move(where)) {}

}  // namespace distq
