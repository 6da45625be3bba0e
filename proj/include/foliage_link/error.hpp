// SPDX-License-Identifier: Apache-2.0
#ifndef FOLIAGE_LINK_ERROR_HPP
#define FOLIAGE_LINK_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace foliage_link {

enum class ErrorCode {
  NonPositiveDistance,
  NegativeDistance,
  DeltaOutOfRange,
  NonPositiveHeight,
  HeightOutOfRange,
  NonPositiveFrequency,
  FullFoliageCover,
  InconsistentGeometry,
  InvalidBand,
  NoSolution,
  BracketExceeded,
  InvalidSpec,
  UnknownPreset,
  ParseError,
  SchemaError,
  DomainError,
  EmptyInput,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::NonPositiveHeight: return "NonPositiveHeight";
    case ErrorCode::HeightOutOfRange: return "HeightOutOfRange";
    case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorCode::FullFoliageCover: return "FullFoliageCover";
    case ErrorCode::InconsistentGeometry: return "InconsistentGeometry";
    case ErrorCode::InvalidBand: return "InvalidBand";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::BracketExceeded: return "BracketExceeded";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the engine. The code identifies the error class,
/// the message names the offending quantity.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace foliage_link

#endif  // FOLIAGE_LINK_ERROR_HPP
