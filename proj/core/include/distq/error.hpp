#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace distq {

/// Failure categories raised by the library. The CLI maps input-side
/// kinds to exit code 2 and numerical kinds to exit code 3.
enum class ErrorKind {
  // input / configuration
  InvalidArgument,
  InvalidLevels,
  InfeasibleCandidate,
  ConfigDomainMismatch,
  TooLarge,
  // numerical
  UnboundedCurvature,
  QuadratureDivergence,
  DegenerateResponse,
  SupportMismatch,
  SingularCovariance,
  NoConvergence,
  NotAMaximum,
  SpectrumUnderflow,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for kinds that signal a numerical failure rather than bad input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  /// `where` names the failing operation, e.g. "fisher::posterior_fisher".
  Error(ErrorKind kind, std::string where, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::string where_;
};

}  // namespace distq
