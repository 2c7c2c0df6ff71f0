#ifndef DIRAC_GAP_ERROR_HPP
#define DIRAC_GAP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dirac_gap {

enum class ErrorCode {
  InvalidSpec,
  GapViolation,
  UnboundedDescriptor,
  DegenerateInterval,
  NonDifferentiableW,
  NonDifferentiable,
  DomainError,
  WindowTooSmall,
  LambdaOutOfDomain,
  ConvergenceFailure,
  NonPositiveAtLeftEnd,
  NotIntegrable,
  AnchorMismatch,
  OverlappingIntervals,
  IntervalFailsCondition,
  InvalidParams,
  NoThreshold,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes caused by bad user input (CLI exit 2); the rest are numeric
/// failures (exit 3).
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dirac_gap

#endif  // DIRAC_GAP_ERROR_HPP
