#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace discodep {

enum class ErrorCode {
  MalformedSpan,
  UnknownKind,
  ShortLine,
  MissingArgument,
  UnbalancedParens,
  MissingNuclearity,
  NonContiguousLeaves,
  FragmentNotFound,
  EmptyAlignment,
  ConstantSeries,
  LengthMismatch,
  TooFewPairs,
  FormatError,
  InvalidArgument,
  Io,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedSpan: return "MalformedSpan";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::ShortLine: return "ShortLine";
    case ErrorCode::MissingArgument: return "MissingArgument";
    case ErrorCode::UnbalancedParens: return "UnbalancedParens";
    case ErrorCode::MissingNuclearity: return "MissingNuclearity";
    case ErrorCode::NonContiguousLeaves: return "NonContiguousLeaves";
    case ErrorCode::FragmentNotFound: return "FragmentNotFound";
    case ErrorCode::EmptyAlignment: return "EmptyAlignment";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library. `line`/`column` are 1-based when set.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt,
        std::optional<std::size_t> column = std::nullopt)
      : std::runtime_error(compose(code, message, line, column)),
        code_(code),
        line_(line),
        column_(column) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  static std::string compose(ErrorCode code, const std::string& message,
                             std::optional<std::size_t> line,
                             std::optional<std::size_t> column) {
    std::string out(error_code_name(code));
    if (line) {
      out += " at line " + std::to_string(*line);
      if (column) out += ", column " + std::to_string(*column);
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

}  // namespace discodep
