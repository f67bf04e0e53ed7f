// Copyright 2026 The attnguide Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "attnguide/error.hpp"

namespace attnguide {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kMissingFile: return "missing file";
    case ErrorCode::kCorruptFile: return "corrupt file";
    case ErrorCode::kNonMonotonicTimestamps: return "non-monotonic timestamps";
    case ErrorCode::kEmptyStream: return "empty stream";
    case ErrorCode::kInsufficientStructure: return "insufficient structure";
    case ErrorCode::kDuplicateId: return "duplicate id";
    case ErrorCode::kPrecondition: return "precondition violated";
    case ErrorCode::kLabelMismatch: return "label mismatch";
    case ErrorCode::kUnpairedCuts: return "unpaired cuts";
    case ErrorCode::kInconsistentSpec: return "inconsistent scenario spec";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace attnguide
