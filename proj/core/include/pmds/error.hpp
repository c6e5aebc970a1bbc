#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmds {

enum class ErrorCode {
  NotPrime,
  DegreeZero,
  FieldTooLarge,
  DivisionByZero,
  MixedFields,
  ZeroVector,
  EmptySet,
  AmbientMismatch,
  NotAHyperplane,
  DependentAnchors,
  BadLastPoint,
  NotEnoughField,
  LineInHyperplane,
  CurveInHyperplane,
  InvalidArgument,
  InstanceTooLarge,
  BlockTooSmall,
  FieldTooSmall,
  DegenerateSpan,
  PolicyUnderfillsLine,
  NoFreePoint,
  PointOffArrangement,
  ParamsInfeasible,
  ProbabilityOutOfRange,
  LineUnderflow,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; `code()` is the
// stable machine-readable part, `what()` carries the diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pmds
