// Copyright 2026 The genaudio-eval Authors
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

#include "genaudio/error.h"

namespace genaudio {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kUnreadableFile: return "unreadable file";
    case ErrorCode::kUnsupportedEncoding: return "unsupported encoding";
    case ErrorCode::kEmptyAudio: return "zero-length audio";
    case ErrorCode::kInvalidConfig: return "invalid config";
    case ErrorCode::kClipTooShort: return "clip shorter than one window";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kEmptyInput: return "empty input";
    case ErrorCode::kDuplicateId: return "duplicate id";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kTruncated: return "truncated payload";
    case ErrorCode::kNonFiniteValues: return "non-finite values";
    case ErrorCode::kMissingLogits: return "missing logits";
    case ErrorCode::kUnpairedId: return "unpaired id";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kSilentInterferer: return "silent interferer";
    case ErrorCode::kStepOutOfRange: return "step out of range";
    case ErrorCode::kIoFailure: return "I/O failure";
    case ErrorCode::kProviderFailure: return "provider failure";
    case ErrorCode::kNotPositiveSemidefinite: return "matrix not PSD";
    case ErrorCode::kNumericFailure: return "numeric failure";
  }
  return "unknown error";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return 1;
    case ErrorCode::kNotPositiveSemidefinite:
    case ErrorCode::kNumericFailure:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

void rethrow_with_context(const Error& e, const std::string& context) {
  // what() already carries the code name; strip it so it is not repeated.
  std::string message = e.what();
  const std::string prefix = std::string(error_code_name(e.code())) + ": ";
  if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
  throw Error(e.code(), context + ": " + message);
}

}  // namespace genaudio
