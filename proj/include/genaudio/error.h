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

#ifndef GENAUDIO_ERROR_H_
#define GENAUDIO_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace genaudio {

enum class ErrorCode {
  // Usage errors (exit code 1).
  kInvalidArgument,
  // Data errors (exit code 2).
  kUnreadableFile,
  kUnsupportedEncoding,
  kEmptyAudio,
  kInvalidConfig,
  kClipTooShort,
  kShapeMismatch,
  kEmptyInput,
  kDuplicateId,
  kBadMagic,
  kTruncated,
  kNonFiniteValues,
  kMissingLogits,
  kUnpairedId,
  kDimensionMismatch,
  kSilentInterferer,
  kStepOutOfRange,
  kIoFailure,
  kProviderFailure,
  // Numeric failures (exit code 3).
  kNotPositiveSemidefinite,
  kNumericFailure,
};

std::string_view error_code_name(ErrorCode code);

// Process exit code for the CLI: 1 usage, 2 data, 3 numeric.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Re-throws `e` with `context` prepended to its message, keeping the code.
[[noreturn]] void rethrow_with_context(const Error& e,
                                       const std::string& context);

}  // namespace genaudio

#endif  // GENAUDIO_ERROR_H_
