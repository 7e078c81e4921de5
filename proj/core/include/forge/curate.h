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

#ifndef FORGE_CURATE_H_
#define FORGE_CURATE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/instruction.h"

namespace forge {

struct CurationConfig {
  double near_dup_threshold = 0.9;
  std::size_t target_total = 1200;
  // Optional explicit per-task targets; when set they replace the uniform
  // target_total / 5 split.
  std::map<TaskKind, std::size_t> per_task_override;
  std::uint64_t rng_seed = 0;

  void Validate() const;
  std::size_t TargetFor(TaskKind task) const;
};

// Normalized text of a pair: tokens of instruction, input and output joined
// by single spaces, fields separated by " \x1f ".
std::string NormalizedPairText(const InstructionPair& pair);

// Token 3-gram shingles of the normalized pair text, hashed and sorted.
// Sequences shorter than three tokens yield one shingle of the whole text.
std::vector<std::uint64_t> PairShingles(const InstructionPair& pair);

double JaccardSorted(std::span<const std::uint64_t> a,
                     std::span<const std::uint64_t> b);

// Drops exact duplicates of the normalized text, then drops any pair whose
// shingle Jaccard similarity to an already kept pair is >= threshold. The
// earliest occurrence survives and order is stable. threshold >= 1 disables
// the near-duplicate pass. Candidate generation uses prefix filtering, so
// the result equals an all-pairs scan.
std::vector<InstructionPair> Dedup(std::span<const InstructionPair> pairs,
                                   double threshold);

// Exactly TargetFor(task) pairs per task, sampled with the configured seed;
// output is task order, then input order. Throws kInsufficientPairs naming
// the first short task.
std::vector<InstructionPair> Balance(std::span<const InstructionPair> pairs,
                                     const CurationConfig& config);

struct Manifest {
  std::size_t count = 0;
  std::map<std::string, std::size_t> per_task;
  std::string sha256;

  nlohmann::json ToJson() const;
};

// Canonical JSONL bytes: one compact object per line, keys sorted, '\n'
// terminated.
std::string SerializeJsonl(std::span<const InstructionPair> pairs);

// Writes the canonical JSONL and returns its manifest. kIoError on failure.
Manifest EmitJsonl(std::span<const InstructionPair> pairs,
                   const std::filesystem::path& path);

std::vector<InstructionPair> LoadPairs(const std::filesystem::path& path);

// --- Held-out zero-shot packs ---------------------------------------------

enum class HeldoutKind : std::uint8_t { kScenarioAds, kRecommendation };

std::string_view HeldoutKindName(HeldoutKind kind);

// How a scenario is phrased in the ad request.
enum class ScenarioStyle : std::uint8_t {
  kFestival,   // "<Name> is almost. Generate an ad for the following products: ..."
  kAudience,   // "Generate an ad for <name> based on the following products: ..."
  kSalesEvent, // "Generate a <name> advertisement for the following products: ..."
};

struct Scenario {
  std::string name;
  ScenarioStyle style = ScenarioStyle::kFestival;
};

struct HeldoutInputs {
  std::vector<Scenario> scenarios;
  std::vector<std::vector<std::string>> product_sets;
  std::vector<std::string> intents;
};

struct HeldoutPrompt {
  std::string id;  // always starts with "heldout-"
  HeldoutKind kind = HeldoutKind::kScenarioAds;
  std::optional<std::string> scenario;
  std::string prompt;

  nlohmann::json ToJson() const;
};

// "a", "a and b", "a, b, and c".
std::string JoinProducts(std::span<const std::string> products);

// scenario_ads: one prompt per (scenario, product set); recommendation: one
// prompt per intent. Throws kEmptyInputs when the relevant lists are empty.
std::vector<HeldoutPrompt> BuildHeldoutPacks(HeldoutKind kind,
                                             const HeldoutInputs& inputs);

HeldoutInputs HeldoutInputsFromJson(const nlohmann::json& j);

void EmitHeldoutPack(std::span<const HeldoutPrompt> prompts,
                     const std::filesystem::path& path);

}  // namespace forge

#endif  // FORGE_CURATE_H_
