#pragma once

#include <stdexcept>
#include <string>

namespace gonosim {

enum class ErrorCode {
  NegativeComponent,
  NonFiniteComponent,
  SumOutOfTolerance,
  DegenerateSex,
  ZeroDenominator,
  DomainViolation,
  Overflow,
  ExactCapExceeded,
  NoConvergence,
  RootFindingStalled,
  InsufficientData,
  BadInput,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NegativeComponent: return "NegativeComponent";
    case ErrorCode::NonFiniteComponent: return "NonFiniteComponent";
    case ErrorCode::SumOutOfTolerance: return "SumOutOfTolerance";
    case ErrorCode::DegenerateSex: return "DegenerateSex";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ExactCapExceeded: return "ExactCapExceeded";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RootFindingStalled: return "RootFindingStalled";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace gonosim
