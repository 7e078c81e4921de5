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

#include "forge/formulate.h"

#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "forge/error.h"
#include "forge/rng.h"
#include "forge/text.h"

namespace forge {
namespace {

[[noreturn]] void MissingField(TaskKind task, std::string_view field) {
  throw Error(ErrorCode::kMissingField,
              std::string(TaskName(task)) + ": missing field '" +
                  std::string(field) + "'");
}

bool HasText(const std::optional<std::string>& value) {
  return value && !value->empty();
}

std::string QueryEnhancedTitle(const std::string& title,
                               const std::string& query) {
  const auto title_tokens = Tokenize(title);
  std::unordered_set<std::string> present(title_tokens.begin(),
                                          title_tokens.end());
  std::string prefix;
  std::size_t start = 0;
  while (start < query.size()) {
    std::size_t end = query.find(' ', start);
    if (end == std::string::npos) end = query.size();
    std::string word = query.substr(start, end - start);
    auto tokens = Tokenize(word);
    bool covered = !tokens.empty();
    for (const auto& t : tokens) covered = covered && present.count(t) > 0;
    if (!word.empty() && !covered) {
      if (!prefix.empty()) prefix += ' ';
      prefix += word;
    }
    start = end + 1;
  }
  return prefix.empty() ? title : prefix + " " + title;
}

}  // namespace

bool IsEligible(TaskKind task, const ProductRecord& record) {
  switch (task) {
    case TaskKind::kAdsGeneration:
    case TaskKind::kProductClassification:
      return !record.title.empty();
    case TaskKind::kTitleRewriting:
      return !record.title.empty() && HasText(record.query);
    case TaskKind::kIntentSpeculation:
      return HasText(record.query);
    case TaskKind::kGeneralQa:
      return false;
  }
  return false;
}

InstructionPair Instantiate(TaskKind task, const ProductRecord& record,
                            const std::optional<QaPair>& qa) {
  InstructionPair pair;
  pair.task = task;
  switch (task) {
    case TaskKind::kAdsGeneration:
      if (record.title.empty()) MissingField(task, "title");
      pair.instruction =
          "Generate a short advertisement for the following product: " +
          record.title;
      pair.input = record.title;
      pair.output = HasText(record.description) ? *record.description
                                                : record.title;
      break;
    case TaskKind::kTitleRewriting:
      if (record.title.empty()) MissingField(task, "title");
      if (!HasText(record.query)) MissingField(task, "query");
      pair.instruction = "Rewrite the product title of " + record.title +
                         " according to the following query: " +
                         *record.query + ".";
      pair.input = "Title: " + record.title + "\nQuery: " + *record.query;
      pair.output = QueryEnhancedTitle(record.title, *record.query);
      break;
    case TaskKind::kProductClassification:
      if (record.title.empty()) MissingField(task, "title");
      pair.instruction =
          "What is the product category of this following product belongs "
          "to? " +
          record.title;
      pair.input = record.title;
      pair.output = std::string(record.taxonomy.name());
      break;
    case TaskKind::kIntentSpeculation:
      if (!HasText(record.query)) MissingField(task, "query");
      pair.instruction = "Given the query of " + *record.query +
                         ", which of the following product category is the "
                         "customer interested in?";
      pair.input = *record.query;
      pair.output = std::string(record.taxonomy.name());
      break;
    case TaskKind::kGeneralQa:
      if (!qa) MissingField(task, "qa");
      if (qa->question.empty()) MissingField(task, "question");
      if (qa->answer.empty()) MissingField(task, "answer");
      pair.instruction = qa->question;
      pair.output = qa->answer;
      break;
  }
  pair.provenance = Provenance{};
  return pair;
}

std::vector<QaPair> LoadQaPairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  }
  std::vector<QaPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object() ||
        !row.contains("question") || !row["question"].is_string() ||
        !row.contains("answer") || !row["answer"].is_string()) {
      throw Error(ErrorCode::kMalformedInput,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected {question, answer}");
    }
    out.push_back({CleanText(row["question"].get<std::string>()),
                   CleanText(row["answer"].get<std::string>())});
  }
  return out;
}

std::vector<InstructionPair> BuildSeedSet(std::span<const ProductRecord> records,
                                          std::span<const QaPair> qa_pairs,
                                          std::size_t per_task,
                                          std::uint64_t seed) {
  if (per_task < 1) {
    throw Error(ErrorCode::kInvalidArgument, "per_task must be >= 1");
  }
  std::vector<InstructionPair> seeds;
  seeds.reserve(per_task * kAllTasks.size());
  for (TaskKind task : kAllTasks) {
    Rng rng(DeriveSeed(seed, TaskName(task)));
    std::vector<std::size_t> eligible;
    if (task == TaskKind::kGeneralQa) {
      for (std::size_t i = 0; i < qa_pairs.size(); ++i) {
        if (!qa_pairs[i].question.empty() && !qa_pairs[i].answer.empty()) {
          eligible.push_back(i);
        }
      }
    } else {
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (IsEligible(task, records[i])) eligible.push_back(i);
      }
    }
    if (eligible.size() < per_task) {
      throw Error(ErrorCode::kInsufficientRecords,
                  std::string(TaskName(task)) + ": have " +
                      std::to_string(eligible.size()) + ", need " +
                      std::to_string(per_task));
    }
    const auto picks = rng.SampleSorted(eligible.size(), per_task);
    for (std::size_t n = 0; n < picks.size(); ++n) {
      const std::size_t src = eligible[picks[n]];
      InstructionPair pair =
          task == TaskKind::kGeneralQa
              ? Instantiate(task, ProductRecord{}, qa_pairs[src])
              : Instantiate(task, records[src]);
      char id[64];
      std::snprintf(id, sizeof(id), "seed-%s-%04zu",
                    std::string(TaskName(task)).c_str(), n);
      pair.id = id;
      seeds.push_back(std::move(pair));
    }
  }
  return seeds;
}

}  // namespace forge
