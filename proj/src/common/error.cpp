// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "common/error.hpp"

namespace leadopt {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnbalancedBracket: return "UnbalancedBracket";
    case ErrorCode::kUnclosedRing: return "UnclosedRing";
    case ErrorCode::kBadValence: return "BadValence";
    case ErrorCode::kUnsupportedElement: return "UnsupportedElement";
    case ErrorCode::kMultiFragment: return "MultiFragment";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kUnknownProperty: return "UnknownProperty";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingKey: return "MissingKey";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kNoAnswerTag: return "NoAnswerTag";
    case ErrorCode::kNoLegalEdits: return "NoLegalEdits";
    case ErrorCode::kIllegalEdit: return "IllegalEdit";
    case ErrorCode::kEmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::kEmptyResults: return "EmptyResults";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace leadopt
