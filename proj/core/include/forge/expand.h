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

#ifndef FORGE_EXPAND_H_
#define FORGE_EXPAND_H_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "forge/instruction.h"
#include "forge/modelio.h"

namespace forge {

// Variants requested per seed for each strategy.
struct VariantCounts {
  std::size_t instruction_rewrite = 4;
  std::size_t response_generation = 4;
  std::size_t response_rewrite = 4;
};

struct ExpansionPlan {
  VariantCounts variants;
  // Classification-style tasks that receive instruction rewrites. Their
  // responses are a closed label set, so they never get response strategies;
  // a classification task left out of this set is not expanded at all.
  std::set<TaskKind> tasks_instruction_only = {
      TaskKind::kProductClassification, TaskKind::kIntentSpeculation};
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

struct TeacherConfig {
  std::string model = "gpt-3.5-turbo-0301";
  Decoding decoding{0.7, 256};
  std::size_t concurrency = 4;
};

struct ExpansionDiagnostic {
  std::string seed_id;
  Strategy strategy = Strategy::kInstructionRewrite;
  std::size_t variant = 0;
  std::string error;
};

struct ExpansionResult {
  std::vector<InstructionPair> pairs;
  std::vector<ExpansionDiagnostic> diagnostics;
  std::size_t calls_attempted = 0;

  bool partial() const { return !diagnostics.empty(); }
};

// Teacher-driven expansion of a seed set.
class Expander {
 public:
  Expander(const ModelClient& client, TeacherConfig config);

  // `count` instruction variants of one pair; each keeps the pair's input and
  // output. Failed variants land in `diagnostics` when given, and are
  // otherwise dropped.
  std::vector<InstructionPair> RewriteInstruction(
      const InstructionPair& pair, std::size_t count, std::uint64_t rng_seed,
      std::vector<ExpansionDiagnostic>* diagnostics = nullptr) const;

  // Teacher response to an (expanded) instruction with the seed's input.
  // Only generative tasks qualify; kEmptyGeneration when cleaning leaves
  // nothing.
  std::string GenerateResponse(TaskKind task, std::string_view instruction,
                               std::string_view seed_input,
                               std::uint64_t request_seed) const;

  // Paraphrase of a response; the caller keeps the instruction fixed.
  std::string RewriteResponse(std::string_view response,
                              std::uint64_t request_seed) const;

  // Seeds plus variants, ordered by seed, then strategy (instruction rewrite,
  // response generation, response rewrite), then variant index. Calls run
  // with bounded concurrency; output does not depend on completion order.
  // Throws kEmptyInput for no seeds and kAllCallsFailed when every call
  // failed.
  ExpansionResult ExpandCorpus(std::span<const InstructionPair> seeds,
                               const ExpansionPlan& plan) const;

 private:
  BackendRequest MakeRequest(std::string prompt, std::uint64_t seed) const;

  const ModelClient* client_;
  TeacherConfig config_;
};

// Per-call request seed for (seed id, strategy, variant).
std::uint64_t VariantSeed(std::uint64_t rng_seed, std::string_view seed_id,
                          Strategy strategy, std::size_t variant);

// Id of an expanded pair: "<seed_id>-ir03", "-rg00", "-rr01".
std::string VariantId(std::string_view seed_id, Strategy strategy,
                      std::size_t variant);

}  // namespace forge

#endif  // FORGE_EXPAND_H_
