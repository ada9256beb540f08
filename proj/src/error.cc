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

#include "lsr/error.h"

namespace lsr {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kUnsupportedVersion: return "unsupported-version";
    case ErrorCode::kUnknownDtype: return "unknown-dtype";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kTrailingData: return "trailing-data";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kDuplicateKey: return "duplicate-key";
    case ErrorCode::kUnknownRegime: return "unknown-regime";
    case ErrorCode::kMissingShift: return "missing-shift";
    case ErrorCode::kMissingReference: return "missing-reference";
    case ErrorCode::kIncompatible: return "incompatible";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
  }
  return "unknown";
}

}  // namespace lsr
