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

#ifndef FORGE_INSTRUCTION_H_
#define FORGE_INSTRUCTION_H_

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "forge/taxonomy.h"

namespace forge {

enum class Origin : std::uint8_t { kSeed, kExpanded };

enum class Strategy : std::uint8_t {
  kInstructionRewrite,
  kResponseGeneration,
  kResponseRewrite,
};

std::string_view OriginName(Origin origin);
std::string_view StrategyName(Strategy strategy);
std::optional<Strategy> ParseStrategy(std::string_view name);

// Where a pair came from. Seeds carry neither strategy nor teacher; expanded
// pairs always name their strategy and the seed they grew from.
struct Provenance {
  Origin origin = Origin::kSeed;
  std::optional<Strategy> strategy;
  std::optional<std::string> seed_id;
  std::optional<std::string> teacher;

  bool Valid() const;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct InstructionPair {
  std::string id;
  TaskKind task = TaskKind::kAdsGeneration;
  std::string instruction;
  std::string input;  // may be empty for general_qa
  std::string output;
  Provenance provenance;

  friend bool operator==(const InstructionPair&,
                         const InstructionPair&) = default;
};

// Canonical row form: keys {id, task, instruction, input, output,
// provenance:{origin, strategy, seed_id, teacher}}, absent values as null.
nlohmann::json ToJson(const InstructionPair& pair);

// Throws Error(kMalformedInput) on schema violations.
InstructionPair PairFromJson(const nlohmann::json& row);

}  // namespace forge

#endif  // FORGE_INSTRUCTION_H_
