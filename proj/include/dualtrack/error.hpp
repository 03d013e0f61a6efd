// Copyright 2026 The Dualtrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dualtrack {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kTransport,
  kMalformedResponse,
  kMissingPlaceholder,
  kProvider,
  kScriptMiss,
  kUnparseable,
  kDimensionMismatch,
  kZeroVector,
  kMissingStageScore,
  kLinkFailure,
  kIo,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kTransport: return "TransportError";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kMissingPlaceholder: return "MissingPlaceholder";
    case ErrorCode::kProvider: return "ProviderError";
    case ErrorCode::kScriptMiss: return "ScriptMiss";
    case ErrorCode::kUnparseable: return "Unparseable";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kMissingStageScore: return "MissingStageScore";
    case ErrorCode::kLinkFailure: return "LinkFailure";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " +
                           message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Failures of an external service rather than of the caller's input.
  bool is_remote_failure() const noexcept {
    return code_ == ErrorCode::kTransport || code_ == ErrorCode::kProvider ||
           code_ == ErrorCode::kMalformedResponse;
  }

 private:
  ErrorCode code_;
};

// Non-fatal conditions (fallbacks taken, items kept on failure) are recorded
// here instead of aborting the pipeline.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace dualtrack
