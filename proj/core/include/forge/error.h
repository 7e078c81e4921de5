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

#ifndef FORGE_ERROR_H_
#define FORGE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

// Every failure surfaced by the library carries one of these codes. The CLI
// maps them onto exit statuses; tests match on them.
enum class ErrorCode {
  kInvalidArgument,  // precondition violation
  kFileUnreadable,
  kIoError,
  kMalformedInput,   // every line of an input file failed to parse
  kEmptyInput,
  kMissingField,
  kInsufficientRecords,
  kInsufficientPairs,
  kTransport,
  kTimeout,
  kMalformedResponse,
  kUnsupported,
  kEmptyGeneration,
  kAllCallsFailed,
  kRankTooLarge,
  kShapeMismatch,
  kDivergence,
  kEmptyCandidate,
  kEmptyReference,
  kEmptySequence,
  kPositiveLogprob,
  kPplAtOrBelowOne,
  kLengthMismatch,
  kDimensionMismatch,
  kNonPositiveValue,
  kWrongArity,
  kMissingTask,
  kDuplicateRating,
  kMisaligned,
  kConfig,
  kLocked,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Backend failures also carry the HTTP status (0 when no response arrived).
class BackendError : public Error {
 public:
  BackendError(ErrorCode code, int status, const std::string& message)
      : Error(code, message), status_(status) {}

  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace forge

#endif  // FORGE_ERROR_H_
