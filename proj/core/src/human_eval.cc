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

#include "forge/human_eval.h"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "forge/error.h"

namespace forge {

using nlohmann::json;

char RateLetter(Rate rate) { return static_cast<char>('A' + static_cast<int>(rate)); }

std::optional<Rate> ParseRate(std::string_view text) {
  if (text.size() != 1) return std::nullopt;
  char c = text[0];
  if (c >= 'a' && c <= 'd') c = static_cast<char>(c - 'a' + 'A');
  if (c < 'A' || c > 'D') return std::nullopt;
  return static_cast<Rate>(c - 'A');
}

HumanEvalReport HumanEvalSummary(std::span<const HumanRating> ratings) {
  HumanEvalReport report;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : ratings) {
    if (r.task != TaskKind::kAdsGeneration && r.task != TaskKind::kTitleRewriting) {
      throw Error(ErrorCode::kInvalidArgument,
                  "human ratings cover ads_generation and title_rewriting, got " +
                      std::string(TaskName(r.task)));
    }
    if (!seen.emplace(r.annotator, r.sample_id).second) {
      throw Error(ErrorCode::kDuplicateRating,
                  "duplicate rating by " + r.annotator + " for " + r.sample_id);
    }
    auto& dist = report.per_task[r.task];
    ++dist.total;
    ++dist.counts[static_cast<std::size_t>(r.rate)];
    ++report.per_annotator[r.annotator];
  }
  for (auto& [task, dist] : report.per_task) {
    for (std::size_t i = 0; i < kRateCount; ++i) {
      dist.fractions[i] =
          static_cast<double>(dist.counts[i]) / static_cast<double>(dist.total);
    }
  }
  return report;
}

json HumanEvalReport::ToJson() const {
  json tasks = json::object();
  for (const auto& [task, dist] : per_task) {
    json fr = json::object();
    json ct = json::object();
    for (std::size_t i = 0; i < kRateCount; ++i) {
      const std::string key(1, RateLetter(static_cast<Rate>(i)));
      fr[key] = dist.fractions[i];
      ct[key] = dist.counts[i];
    }
    tasks[std::string(TaskName(task))] =
        json{{"total", dist.total}, {"fractions", fr}, {"counts", ct}};
  }
  return json{{"per_task", tasks}, {"per_annotator", per_annotator}};
}

HumanRating RatingFromJson(const json& j) {
  HumanRating r;
  try {
    r.annotator = j.at("annotator").get<std::string>();
    r.sample_id = j.at("sample_id").get<std::string>();
    auto task = ParseTask(j.at("task").get<std::string>());
    if (!task) throw Error(ErrorCode::kMalformedInput, "unknown task");
    r.task = *task;
    auto rate = ParseRate(j.at("rate").get<std::string>());
    if (!rate) throw Error(ErrorCode::kMalformedInput, "rate must be A, B, C or D");
    r.rate = *rate;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("bad rating: ") + e.what());
  }
  return r;
}

std::vector<HumanRating> ParseRatings(std::string_view jsonl) {
  std::vector<HumanRating> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row = json::parse(line, nullptr, false);
    try {
      if (row.is_discarded()) throw Error(ErrorCode::kMalformedInput, "invalid json");
      out.push_back(RatingFromJson(row));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<HumanRating> LoadRatings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseRatings(buf.str());
}

}  // namespace forge
