#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace birkhoff {

enum class ErrorCode {
  kRefinementExhausted,
  kDependentFrequencies,
  kBasisMismatch,
  kDimensionMismatch,
  kTruncationMismatch,
  kNonRealResult,
  kNonTerminating,
  kResonantDenominator,
  kNotActionPolynomial,
  kInvalidInput,
  kMultisetMismatch,
  kInconsistentE0,
  kEmptyInput,
  kAmbiguousTail,
  kInsufficientLevels,
  kOverdeterminedMismatch,
  kNotBlockDiagonal,
  kNotCommuting,
  kNotConverged,
  kSchemaError,
  kParseError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; `code()` is the
// machine-readable part, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRefinementExhausted: return "REFINEMENT_EXHAUSTED";
    case ErrorCode::kDependentFrequencies: return "DEPENDENT_FREQUENCIES";
    case ErrorCode::kBasisMismatch: return "BASIS_MISMATCH";
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kTruncationMismatch: return "TRUNCATION_MISMATCH";
    case ErrorCode::kNonRealResult: return "NON_REAL_RESULT";
    case ErrorCode::kNonTerminating: return "NON_TERMINATING";
    case ErrorCode::kResonantDenominator: return "RESONANT_DENOMINATOR";
    case ErrorCode::kNotActionPolynomial: return "NOT_ACTION_POLYNOMIAL";
    case ErrorCode::kInvalidInput: return "INVALID_INPUT";
    case ErrorCode::kMultisetMismatch: return "MULTISET_MISMATCH";
    case ErrorCode::kInconsistentE0: return "INCONSISTENT_E0";
    case ErrorCode::kEmptyInput: return "EMPTY_INPUT";
    case ErrorCode::kAmbiguousTail: return "AMBIGUOUS_TAIL";
    case ErrorCode::kInsufficientLevels: return "INSUFFICIENT_LEVELS";
    case ErrorCode::kOverdeterminedMismatch: return "OVERDETERMINED_MISMATCH";
    case ErrorCode::kNotBlockDiagonal: return "NOT_BLOCK_DIAGONAL";
    case ErrorCode::kNotCommuting: return "NOT_COMMUTING";
    case ErrorCode::kNotConverged: return "NOT_CONVERGED";
    case ErrorCode::kSchemaError: return "SCHEMA_ERROR";
    case ErrorCode::kParseError: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace birkhoff
