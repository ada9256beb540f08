/*
 * Copyright 2026 The lsr Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LSR_ERROR_H_
#define LSR_ERROR_H_

#include <stdexcept>
#include <string>

namespace lsr {

enum class ErrorCode {
  kIo,
  kBadMagic,
  kUnsupportedVersion,
  kUnknownDtype,
  kTruncated,
  kTrailingData,
  kNonFinite,
  kParse,
  kOutOfRange,
  kDuplicateKey,
  kUnknownRegime,
  kMissingShift,
  kMissingReference,
  kIncompatible,
  kDimensionMismatch,
};

const char* ErrorCodeName(ErrorCode code);

// Error raised by file readers and data validation. The code lets callers
// and tests tell failure kinds apart without matching on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lsr

#endif  // LSR_ERROR_H_
