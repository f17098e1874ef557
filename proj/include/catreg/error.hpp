#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catreg {

enum class ErrorCode {
  EmptyTable,
  NegativeCell,
  ZeroTotal,
  InvalidArgument,
  InvalidDims,
  DimensionMismatch,
  DegenerateMargin,
  ZeroLambda,
  NoDiscordantPairs,
  InsufficientReplicates,
  ZeroMargin,
  HypothesisViolated,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::NegativeCell: return "NegativeCell";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDims: return "InvalidDims";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateMargin: return "DegenerateMargin";
    case ErrorCode::ZeroLambda: return "ZeroLambda";
    case ErrorCode::NoDiscordantPairs: return "NoDiscordantPairs";
    case ErrorCode::InsufficientReplicates: return "InsufficientReplicates";
    case ErrorCode::ZeroMargin: return "ZeroMargin";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Input-format failure with a 1-based source location (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& what, std::size_t line, std::size_t column)
      : Error(code, located(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string located(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    std::string loc = "line " + std::to_string(line);
    if (column != 0) loc += ", column " + std::to_string(column);
    return loc + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const char* what) {
  if (!ok) fail(code, what);
}

}  // namespace detail
}  // namespace catreg
