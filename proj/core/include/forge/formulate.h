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

#ifndef FORGE_FORMULATE_H_
#define FORGE_FORMULATE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/instruction.h"
#include "forge/record.h"

namespace forge {

// A platform help-center question with its curated answer.
struct QaPair {
  std::string question;
  std::string answer;
};

// Reads {question, answer} JSONL rows. Text is cleaned; malformed rows throw.
std::vector<QaPair> LoadQaPairs(const std::filesystem::path& path);

// Fills the task's seed template from the record (or the QA pair for
// general_qa). Slots:
//   ads_generation          instruction embeds the title; input = title;
//                           output = description, else title
//   title_rewriting         instruction embeds title and query;
//                           input = "Title: ...\nQuery: ..."; output = query
//                           words missing from the title, then the title
//   product_classification  instruction embeds the title; input = title;
//                           output = taxonomy label
//   intent_speculation      instruction embeds the query; input = query;
//                           output = taxonomy label
//   general_qa              instruction = question; input empty;
//                           output = answer
// Throws Error(kMissingField) when a required slot is absent. The returned
// pair has an empty id and seed provenance.
InstructionPair Instantiate(TaskKind task, const ProductRecord& record,
                            const std::optional<QaPair>& qa = std::nullopt);

// True when the record carries every slot the task needs.
bool IsEligible(TaskKind task, const ProductRecord& record);

// Deterministic seed set: per_task pairs for each task, sampled without
// replacement from eligible records (QA pairs for general_qa). Ids are
// "seed-<task>-<nnnn>". Throws kInsufficientRecords naming the task.
std::vector<InstructionPair> BuildSeedSet(std::span<const ProductRecord> records,
                                          std::span<const QaPair> qa_pairs,
                                          std::size_t per_task,
                                          std::uint64_t seed);

}  // namespace forge

#endif  // FORGE_FORMULATE_H_
