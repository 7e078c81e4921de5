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

#include "forge/instruction.h"

#include "forge/error.h"

namespace forge {

using nlohmann::json;

std::string_view OriginName(Origin origin) {
  return origin == Origin::kSeed ? "seed" : "expanded";
}

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kInstructionRewrite: return "instruction_rewrite";
    case Strategy::kResponseGeneration: return "response_generation";
    case Strategy::kResponseRewrite: return "response_rewrite";
  }
  return "unknown";
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kInstructionRewrite,
                     Strategy::kResponseGeneration,
                     Strategy::kResponseRewrite}) {
    if (StrategyName(s) == name) return s;
  }
  return std::nullopt;
}

bool Provenance::Valid() const {
  if (origin == Origin::kSeed) return !strategy && !teacher;
  return strategy.has_value() && seed_id.has_value();
}

namespace {

json OptionalText(const std::optional<std::string>& value) {
  return value ? json(*value) : json(nullptr);
}

std::string RequireText(const json& row, const char* key) {
  auto it = row.find(key);
  if (it == row.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("pair row: missing text field '") + key + "'");
  }
  return it->get<std::string>();
}

std::optional<std::string> OptionalField(const json& row, const char* key) {
  auto it = row.find(key);
  if (it == row.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("pair row: '") + key + "' must be text or null");
  }
  return it->get<std::string>();
}

}  // namespace

json ToJson(const InstructionPair& pair) {
  const Provenance& p = pair.provenance;
  return json{
      {"id", pair.id},
      {"task", TaskName(pair.task)},
      {"instruction", pair.instruction},
      {"input", pair.input},
      {"output", pair.output},
      {"provenance",
       {{"origin", OriginName(p.origin)},
        {"strategy",
         p.strategy ? json(StrategyName(*p.strategy)) : json(nullptr)},
        {"seed_id", OptionalText(p.seed_id)},
        {"teacher", OptionalText(p.teacher)}}},
  };
}

InstructionPair PairFromJson(const json& row) {
  if (!row.is_object()) {
    throw Error(ErrorCode::kMalformedInput, "pair row is not an object");
  }
  InstructionPair pair;
  pair.id = RequireText(row, "id");
  auto task = ParseTask(RequireText(row, "task"));
  if (!task) throw Error(ErrorCode::kMalformedInput, "pair row: unknown task");
  pair.task = *task;
  pair.instruction = RequireText(row, "instruction");
  pair.input = RequireText(row, "input");
  pair.output = RequireText(row, "output");

  auto prov_it = row.find("provenance");
  if (prov_it == row.end() || !prov_it->is_object()) {
    throw Error(ErrorCode::kMalformedInput, "pair row: missing provenance");
  }
  const json& prov = *prov_it;
  std::string origin = RequireText(prov, "origin");
  if (origin == "seed") {
    pair.provenance.origin = Origin::kSeed;
  } else if (origin == "expanded") {
    pair.provenance.origin = Origin::kExpanded;
  } else {
    throw Error(ErrorCode::kMalformedInput, "pair row: unknown origin");
  }
  if (auto s = OptionalField(prov, "strategy")) {
    auto strategy = ParseStrategy(*s);
    if (!strategy) {
      throw Error(ErrorCode::kMalformedInput, "pair row: unknown strategy");
    }
    pair.provenance.strategy = *strategy;
  }
  pair.provenance.seed_id = OptionalField(prov, "seed_id");
  pair.provenance.teacher = OptionalField(prov, "teacher");
  if (!pair.provenance.Valid()) {
    throw Error(ErrorCode::kMalformedInput,
                "pair row " + pair.id + ": inconsistent provenance");
  }
  return pair;
}

}  // namespace forge
