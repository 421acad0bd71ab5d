// Copyright 2026 The leadopt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef LEADOPT_COMMON_ERROR_HPP_
#define LEADOPT_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace leadopt {

// Every structured failure in the library carries one of these codes. The C
// API maps them one-to-one onto leadopt_status values.
enum class ErrorCode {
  kSyntaxError = 1,
  kUnbalancedBracket,
  kUnclosedRing,
  kBadValence,
  kUnsupportedElement,
  kMultiFragment,
  kLengthMismatch,
  kBudgetExhausted,
  kUnknownProperty,
  kParseError,
  kMissingKey,
  kNonFiniteScore,
  kNoAnswerTag,
  kNoLegalEdits,
  kIllegalEdit,
  kEmptyAfterFilter,
  kEmptyResults,
  kNonFiniteGradient,
  kConfigError,
  kIoError,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace leadopt

#endif  // LEADOPT_COMMON_ERROR_HPP_
