#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gibbscert {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  NonUniqueStationary,
  NotReversible,
  SingularStationary,
  NoSpectralGap,
  PreconditionUnmet,
  ZeroFunction,
  NullConditioningEvent,
  InvalidSpec,
  InvalidBlockSize,
  NotTwoBlock,
  NonPositiveWeight,
  MissingLevelKernel,
  GammaDominationViolated,
  ZeroSelectionProb,
  NonUniformSelection,
  StateSpaceTooLarge,
  InvalidStart,
  TooFewBatches,
  NotAbsolutelyContinuous,
  ParseError,
  SchemaError,
  Internal,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonUniqueStationary: return "NonUniqueStationary";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::SingularStationary: return "SingularStationary";
    case ErrorCode::NoSpectralGap: return "NoSpectralGap";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::NullConditioningEvent: return "NullConditioningEvent";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidBlockSize: return "InvalidBlockSize";
    case ErrorCode::NotTwoBlock: return "NotTwoBlock";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::MissingLevelKernel: return "MissingLevelKernel";
    case ErrorCode::GammaDominationViolated: return "GammaDominationViolated";
    case ErrorCode::ZeroSelectionProb: return "ZeroSelectionProb";
    case ErrorCode::NonUniformSelection: return "NonUniformSelection";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::InvalidStart: return "InvalidStart";
    case ErrorCode::TooFewBatches: return "TooFewBatches";
    case ErrorCode::NotAbsolutelyContinuous: return "NotAbsolutelyContinuous";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Detailed-balance violation; carries the worst offending state pair.
class NotReversibleError : public Error {
 public:
  NotReversibleError(std::size_t from, std::size_t to, double defect)
      : Error(ErrorCode::NotReversible,
              "detailed balance violated at (" + std::to_string(from) + ", " +
                  std::to_string(to) + "), defect " + std::to_string(defect)),
        from_(from), to_(to), defect_(defect) {}

  std::size_t from() const noexcept { return from_; }
  std::size_t to() const noexcept { return to_; }
  double defect() const noexcept { return defect_; }

 private:
  std::size_t from_;
  std::size_t to_;
  double defect_;
};

}  // namespace gibbscert
