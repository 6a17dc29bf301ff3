#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smlab {

enum class ErrorCode {
  DomainViolation,
  ArithmeticDomain,
  RangeViolation,
  ToleranceNotMet,
  NotPositiveDefinite,
  NotConverged,
  LeftDomain,
  DegeneratePlane,
  ZeroVector,
  NotOrthogonal,
  WrongDimension,
  HessianDegenerate,
  StabilityViolation,
  UnknownName,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception; the code is what
// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smlab
