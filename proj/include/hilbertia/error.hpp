#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hilbertia {

enum class ErrorCode {
  NonInvertible,
  DegenerateImage,
  NotHyperbolic,
  NotInterior,
  NotOnBoundary,
  OriginNotInterior,
  TooFewPoints,
  EmptyIntersection,
  NotConverged,
  InvalidWord,
  TooShort,
  UnknownCurve,
  InsufficientData,
  MismatchedBoundary,
  NonConvexDomain,
  TooCloseToBoundary,
  NotPositiveDefinite,
  InvalidInput,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::DegenerateImage: return "DegenerateImage";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::InvalidWord: return "InvalidWord";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::UnknownCurve: return "UnknownCurve";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::MismatchedBoundary: return "MismatchedBoundary";
    case ErrorCode::NonConvexDomain: return "NonConvexDomain";
    case ErrorCode::TooCloseToBoundary: return "TooCloseToBoundary";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every numerical failure in the library is reported through this type; the
/// code names the failure mode and what() carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace hilbertia
