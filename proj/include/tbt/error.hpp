#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tbt {

enum class ErrorCode {
  ZeroRow,
  SpanMismatch,
  InvalidSpan,
  DependentRows,
  EmptyCode,
  LengthMismatch,
  TooLarge,
  ShapeMismatch,
  EmptyTrellis,
  MissingSubtrellis,
  NoPath,
  InvalidArgument,
  ParseError,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::InvalidSpan: return "InvalidSpan";
    case ErrorCode::DependentRows: return "DependentRows";
    case ErrorCode::EmptyCode: return "EmptyCode";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyTrellis: return "EmptyTrellis";
    case ErrorCode::MissingSubtrellis: return "MissingSubtrellis";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code the
/// caller can switch on; the message is for humans only.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tbt
