#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bioml {

enum class ErrorCode {
  // configuration
  Config,
  InvalidSize,
  InvalidK,
  InvalidFolds,
  Unsupported,
  // data
  MissingColumn,
  NonNumericCell,
  EmptyFile,
  SchemaMismatch,
  DegenerateSplit,
  Io,
  // numerics / model
  LengthMismatch,
  EmptyInput,
  ConstantVector,
  ConvergenceError,
  DivergenceError,
};

enum class ErrorCategory { Config, Data, Model };

ErrorCategory category_of(ErrorCode code);
std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception. The code decides
// the CLI exit status and the failure marker written into result tables.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace bioml
