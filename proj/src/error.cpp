#include "bioml/error.hpp"

namespace bioml {

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidSize:
    case ErrorCode::InvalidK:
    case ErrorCode::InvalidFolds:
    case ErrorCode::Unsupported:
      return ErrorCategory::Config;
    case ErrorCode::MissingColumn:
    case ErrorCode::NonNumericCell:
    case ErrorCode::EmptyFile:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::DegenerateSplit:
    case ErrorCode::Io:
      return ErrorCategory::Data;
    case ErrorCode::LengthMismatch:
    case ErrorCode::EmptyInput:
    case ErrorCode::ConstantVector:
    case ErrorCode::ConvergenceError:
    case ErrorCode::DivergenceError:
      return ErrorCategory::Model;
  }
  return ErrorCategory::Model;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return "Config";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::InvalidFolds: return "InvalidFolds";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::Io: return "Io";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ConstantVector: return "ConstantVector";
    case ErrorCode::ConvergenceError: return "ConvergenceError";
    case ErrorCode::DivergenceError: return "DivergenceError";
  }
  return "Unknown";
}

}  // namespace bioml
