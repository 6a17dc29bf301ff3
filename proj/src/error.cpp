#include "smlab/error.hpp"

namespace smlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::ArithmeticDomain: return "ArithmeticDomain";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::HessianDegenerate: return "HessianDegenerate";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace smlab
