#include "memsat/error.hpp"

namespace memsat {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::NotThreeSat: return "NotThreeSat";
    case ErrorCode::VarOutOfRange: return "VarOutOfRange";
    case ErrorCode::DuplicateVarInClause: return "DuplicateVarInClause";
    case ErrorCode::InvalidFormula: return "InvalidFormula";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotInClause: return "NotInClause";
    case ErrorCode::OutOfBoundsState: return "OutOfBoundsState";
    case ErrorCode::NonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "IoError";
  }
  return "Error";
}

}  // namespace memsat
