// Copyright 2026 The Forge Authors.
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

#include "forge/error.h"

namespace forge {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kFileUnreadable: return "FileUnreadable";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kInsufficientRecords: return "InsufficientRecords";
    case ErrorCode::kInsufficientPairs: return "InsufficientPairs";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kEmptyGeneration: return "EmptyGeneration";
    case ErrorCode::kAllCallsFailed: return "AllCallsFailed";
    case ErrorCode::kRankTooLarge: return "RankTooLarge";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDivergence: return "Divergence";
    case ErrorCode::kEmptyCandidate: return "EmptyCandidate";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kPositiveLogprob: return "PositiveLogprob";
    case ErrorCode::kPplAtOrBelowOne: return "PplAtOrBelowOne";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonPositiveValue: return "NonPositiveValue";
    case ErrorCode::kWrongArity: return "WrongArity";
    case ErrorCode::kMissingTask: return "MissingTask";
    case ErrorCode::kDuplicateRating: return "DuplicateRating";
    case ErrorCode::kMisaligned: return "Misaligned";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kLocked: return "Locked";
  }
  return "Unknown";
}

}  // namespace forge
