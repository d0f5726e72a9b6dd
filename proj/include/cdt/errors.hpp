#pragma once

#include <stdexcept>
#include <string>

namespace cdt {

enum class ErrorCode {
  InvalidArgument,
  SignatureMismatch,
  SquareNotMinusOne,
  TruncationTooLarge,
  ArgumentOutOfRadius,
  QuadratureDisagreement,
  RecurrenceBreakdown,
  NodeCountExceeded,
  LengthMismatch,
  PlanMismatch,
  BudgetExceeded,
  ZeroNorm,
  SyntaxError,
  UnknownCoordinate,
  DepthExceeded,
  NonFiniteResult,
  SchemaError,
  IoError,
};

// Errors that originate in user input (files, expressions, blade labels)
// as opposed to numerical failures inside a computation.
inline bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::SquareNotMinusOne:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownCoordinate:
    case ErrorCode::DepthExceeded:
    case ErrorCode::SchemaError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidArgument:
      return true;
    default:
      return false;
  }
}

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cdt
