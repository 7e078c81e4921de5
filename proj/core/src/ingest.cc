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

#include "forge/ingest.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "forge/error.h"
#include "forge/rng.h"
#include "forge/text.h"

namespace forge {
namespace {

using nlohmann::json;

// Returns a reason string when the row is rejected.
std::string ParseRecord(const std::string& line, ProductRecord* out) {
  json row = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (row.is_discarded()) return "invalid json";
  if (!row.is_object()) return "row is not an object";

  auto text_field = [&](const char* key, bool required,
                        std::optional<std::string>* value) -> std::string {
    auto it = row.find(key);
    if (it == row.end() || it->is_null()) {
      return required ? std::string("missing ") + key : std::string();
    }
    if (!it->is_string()) return std::string(key) + " is not a string";
    std::string cleaned = CleanText(it->get<std::string>());
    if (cleaned.empty()) {
      if (required) return std::string(key) + " is empty after cleaning";
      return {};
    }
    *value = std::move(cleaned);
    return {};
  };

  auto id_it = row.find("id");
  if (id_it == row.end() || id_it->is_null()) return "missing id";
  if (id_it->is_string()) {
    out->id = id_it->get<std::string>();
  } else if (id_it->is_number_integer()) {
    out->id = id_it->dump();
  } else {
    return "id is neither string nor integer";
  }
  if (out->id.empty()) return "empty id";

  std::optional<std::string> title;
  if (auto err = text_field("title", true, &title); !err.empty()) return err;
  out->title = std::move(*title);
  if (auto err = text_field("description", false, &out->description);
      !err.empty()) {
    return err;
  }
  if (auto err = text_field("query", false, &out->query); !err.empty()) {
    return err;
  }

  auto tax_it = row.find("taxonomy");
  if (tax_it == row.end() || !tax_it->is_string()) return "missing taxonomy";
  auto label = TaxonomyLabel::Parse(tax_it->get<std::string>());
  if (!label) return "invalid taxonomy '" + tax_it->get<std::string>() + "'";
  out->taxonomy = *label;

  auto act_it = row.find("action");
  if (act_it == row.end() || !act_it->is_string()) return "missing action";
  auto action = ParseAction(act_it->get<std::string>());
  if (!action) return "invalid action '" + act_it->get<std::string>() + "'";
  out->action = *action;
  return {};
}

}  // namespace

LoadResult ParseInteractions(std::string_view jsonl) {
  LoadResult result;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t nonblank = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string line(jsonl.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (end == jsonl.size()) break;
      continue;
    }
    ++nonblank;
    ProductRecord record;
    std::string reason = ParseRecord(line, &record);
    if (reason.empty() && !seen_ids.insert(record.id).second) {
      reason = "duplicate id '" + record.id + "'";
    }
    if (reason.empty()) {
      result.records.push_back(std::move(record));
    } else {
      result.diagnostics.push_back({line_no, std::move(reason)});
    }
    if (end == jsonl.size()) break;
  }
  if (nonblank > 0 && result.records.empty()) {
    throw Error(ErrorCode::kMalformedInput,
                "all " + std::to_string(nonblank) + " lines were rejected; "
                "first: line " + std::to_string(result.diagnostics[0].line) +
                    ": " + result.diagnostics[0].reason);
  }
  return result;
}

LoadResult LoadInteractions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseInteractions(buf.str());
}

void WriteDiagnostics(const std::filesystem::path& path,
                      std::span<const LineDiagnostic> diagnostics) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& d : diagnostics) {
    out << json{{"line", d.line}, {"reason", d.reason}}.dump() << '\n';
  }
}

std::vector<ProductRecord> FilterByAction(
    std::span<const ProductRecord> records) {
  std::vector<ProductRecord> out;
  for (const auto& r : records) {
    if (r.action != Action::kNoAction) out.push_back(r);
  }
  return out;
}

DatasetSplit Split(std::span<const ProductRecord> records, double ratio,
                   std::uint64_t seed) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "split: no records");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "split: ratio must be in (0, 1)");
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));

  // The epsilon keeps products like 0.8 * 10 from ceiling up to 9.
  const auto n_train = static_cast<std::size_t>(
      std::ceil(ratio * static_cast<double>(records.size()) - 1e-9));
  DatasetSplit split;
  split.seed = seed;
  split.ratio = ratio;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? split.train : split.test).push_back(records[order[i]]);
  }
  return split;
}

}  // namespace forge
