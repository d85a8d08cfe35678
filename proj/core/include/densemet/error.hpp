#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace densemet {

enum class ErrorCode {
  // metric_core
  NotSquare,
  AsymmetricMatrix,
  NonzeroDiagonal,
  NonpositiveOffDiagonal,
  TriangleViolation,
  StrongTriangleViolation,
  SeparationUndefined,
  LabelMismatch,
  ValueOutsideRangeSet,
  ZeroOffDiagonal,
  // moduli
  DegenerateSpace,
  BadScaleCutoff,
  // build
  PieceMismatch,
  NotUltrametric,
  NotLipschitzOnSubset,
  TooFewPoints,
  BadPartition,
  // cantor
  LengthMismatch,
  SequenceTooShort,
  NotShrinking,
  EnvelopeViolation,
  ShiftTooLarge,
  WindowMiss,
  BadRangeSet,
  GenerationFailed,
  // lab / io
  BadConfig,
  BadInput,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace densemet
