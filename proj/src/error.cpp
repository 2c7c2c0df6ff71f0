#include "dirac_gap/error.hpp"

namespace dirac_gap {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::GapViolation: return "GapViolation";
    case ErrorCode::UnboundedDescriptor: return "UnboundedDescriptor";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::NonDifferentiableW: return "NonDifferentiableW";
    case ErrorCode::NonDifferentiable: return "NonDifferentiable";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::LambdaOutOfDomain: return "LambdaOutOfDomain";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NonPositiveAtLeftEnd: return "NonPositiveAtLeftEnd";
    case ErrorCode::NotIntegrable: return "NotIntegrable";
    case ErrorCode::AnchorMismatch: return "AnchorMismatch";
    case ErrorCode::OverlappingIntervals: return "OverlappingIntervals";
    case ErrorCode::IntervalFailsCondition: return "IntervalFailsCondition";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NoThreshold: return "NoThreshold";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec:
    case ErrorCode::GapViolation:
    case ErrorCode::UnboundedDescriptor:
    case ErrorCode::DegenerateInterval:
    case ErrorCode::NonDifferentiableW:
    case ErrorCode::NonDifferentiable:
    case ErrorCode::DomainError:
    case ErrorCode::WindowTooSmall:
    case ErrorCode::LambdaOutOfDomain:
    case ErrorCode::AnchorMismatch:
    case ErrorCode::OverlappingIntervals:
    case ErrorCode::IntervalFailsCondition:
    case ErrorCode::InvalidParams:
    case ErrorCode::NoThreshold:
    case ErrorCode::NotIntegrable:
      return true;
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::NonPositiveAtLeftEnd:
      return false;
  }
  return false;
}

}  // namespace dirac_gap
