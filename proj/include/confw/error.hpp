#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace confw {

enum class ErrorCode {
  PointOutsideDomain,
  BranchCutViolation,
  NonFiniteInput,
  InvalidAutomorphism,
  DomainMismatch,
  RectangleNotInterior,
  IntegrandNotFinite,
  InvalidGrid,
  InvalidExponents,
  ExponentOutOfRange,
  KpqDivergent,
  GridTooCoarse,
  IterationDivergence,
  RhsNotFinite,
  SingularTridiagonal,
  UnknownName,
  InvalidBump,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::BranchCutViolation: return "BranchCutViolation";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::InvalidAutomorphism: return "InvalidAutomorphism";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::RectangleNotInterior: return "RectangleNotInterior";
    case ErrorCode::IntegrandNotFinite: return "IntegrandNotFinite";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidExponents: return "InvalidExponents";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::KpqDivergent: return "KpqDivergent";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::IterationDivergence: return "IterationDivergence";
    case ErrorCode::RhsNotFinite: return "RhsNotFinite";
    case ErrorCode::SingularTridiagonal: return "SingularTridiagonal";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::InvalidBump: return "InvalidBump";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace confw
