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

#ifndef FORGE_INGEST_H_
#define FORGE_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "forge/record.h"

namespace forge {

// A rejected input line. Line numbers are 1-based.
struct LineDiagnostic {
  std::size_t line = 0;
  std::string reason;

  friend bool operator==(const LineDiagnostic&, const LineDiagnostic&) = default;
};

struct LoadResult {
  std::vector<ProductRecord> records;
  std::vector<LineDiagnostic> diagnostics;
};

// Reads JSONL interaction rows with keys id, title, description, taxonomy,
// query, action. Text fields pass through CleanText. Bad lines are skipped
// and reported; the load fails (kMalformedInput) only when every non-blank
// line was rejected. Throws kFileUnreadable when the path cannot be opened.
LoadResult LoadInteractions(const std::filesystem::path& path);

// Same as LoadInteractions over an in-memory buffer.
LoadResult ParseInteractions(std::string_view jsonl);

// Writes {line, reason} rows, one per diagnostic.
void WriteDiagnostics(const std::filesystem::path& path,
                      std::span<const LineDiagnostic> diagnostics);

// Drops records the customer showed no interest in. Order is preserved.
std::vector<ProductRecord> FilterByAction(std::span<const ProductRecord> records);

struct DatasetSplit {
  std::vector<ProductRecord> train;
  std::vector<ProductRecord> test;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

// Seeded shuffle, then the first ceil(ratio * n) records go to train.
// ratio must lie in (0, 1); empty input throws kEmptyInput.
DatasetSplit Split(std::span<const ProductRecord> records, double ratio,
                   std::uint64_t seed);

}  // namespace forge

#endif  // FORGE_INGEST_H_
