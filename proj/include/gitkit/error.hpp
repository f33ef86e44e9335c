#pragma once

#include <stdexcept>
#include <string>

namespace gitkit {

enum class ErrorCode {
  NotSkewHermitian,
  NotClosedUnderBracket,
  RankDeficientWeights,
  PolarFailure,
  NotInComplexification,
  Singular,
  UnsupportedPreset,
  ZeroInput,
  NotToral,
  NotPowerOfTwo,
  NotInLattice,
  NotCritical,
  StepSizeUnderflow,
  ConsistencyLost,
  NotConverged,
  NotUnstable,
  ExtrapolationDiverged,
  InsufficientSamples,
  EmptySupport,
  DegeneratePlane,
  NotClosed,
  ParseError,
  ValidationError,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotSkewHermitian: return "NotSkewHermitian";
    case ErrorCode::NotClosedUnderBracket: return "NotClosedUnderBracket";
    case ErrorCode::RankDeficientWeights: return "RankDeficientWeights";
    case ErrorCode::PolarFailure: return "PolarFailure";
    case ErrorCode::NotInComplexification: return "NotInComplexification";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::UnsupportedPreset: return "UnsupportedPreset";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::NotToral: return "NotToral";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::NotInLattice: return "NotInLattice";
    case ErrorCode::NotCritical: return "NotCritical";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::ConsistencyLost: return "ConsistencyLost";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NotUnstable: return "NotUnstable";
    case ErrorCode::ExtrapolationDiverged: return "ExtrapolationDiverged";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gitkit
