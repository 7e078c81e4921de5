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

#include "forge/expand.h"

#include <cstdio>
#include <optional>

#include "forge/error.h"
#include "forge/parallel.h"
#include "forge/prompts.h"
#include "forge/rng.h"

namespace forge {

void ExpansionPlan::Validate() const {
  for (TaskKind task : tasks_instruction_only) {
    if (!IsClassificationTask(task)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(TaskName(task)) +
                      " is generative; only classification-style tasks can be "
                      "instruction-only");
    }
  }
}

std::uint64_t VariantSeed(std::uint64_t rng_seed, std::string_view seed_id,
                          Strategy strategy, std::size_t variant) {
  return DeriveSeed(rng_seed, std::string(seed_id) + "/" +
                                  std::string(StrategyName(strategy)) + "/" +
                                  std::to_string(variant));
}

std::string VariantId(std::string_view seed_id, Strategy strategy,
                      std::size_t variant) {
  const char* tag = strategy == Strategy::kInstructionRewrite   ? "ir"
                    : strategy == Strategy::kResponseGeneration ? "rg"
                                                                : "rr";
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "-%s%02zu", tag, variant);
  return std::string(seed_id) + suffix;
}

Expander::Expander(const ModelClient& client, TeacherConfig config)
    : client_(&client), config_(std::move(config)) {}

BackendRequest Expander::MakeRequest(std::string prompt,
                                     std::uint64_t seed) const {
  BackendRequest request;
  request.kind = RequestKind::kComplete;
  request.text = std::move(prompt);
  request.decoding = config_.decoding;
  request.model = config_.model;
  request.seed = seed;
  return request;
}

namespace {

InstructionPair MakeVariant(const InstructionPair& seed, Strategy strategy,
                            std::size_t variant, const std::string& teacher) {
  InstructionPair out = seed;
  out.id = VariantId(seed.id, strategy, variant);
  out.provenance = Provenance{Origin::kExpanded, strategy, seed.id, teacher};
  return out;
}

}  // namespace

std::vector<InstructionPair> Expander::RewriteInstruction(
    const InstructionPair& pair, std::size_t count, std::uint64_t rng_seed,
    std::vector<ExpansionDiagnostic>* diagnostics) const {
  std::vector<std::optional<std::string>> texts(count);
  std::vector<std::string> errors(count);
  ParallelFor(count, config_.concurrency, [&](std::size_t k) {
    try {
      std::string text = client_->Complete(MakeRequest(
          InstructionRewritePrompt(pair.instruction),
          VariantSeed(rng_seed, pair.id, Strategy::kInstructionRewrite, k)));
      if (text.empty()) {
        throw Error(ErrorCode::kEmptyGeneration, "empty instruction rewrite");
      }
      texts[k] = std::move(text);
    } catch (const Error& e) {
      errors[k] = e.what();
    }
  });
  std::vector<InstructionPair> out;
  for (std::size_t k = 0; k < count; ++k) {
    if (texts[k]) {
      InstructionPair v =
          MakeVariant(pair, Strategy::kInstructionRewrite, k, config_.model);
      v.instruction = std::move(*texts[k]);
      out.push_back(std::move(v));
    } else if (diagnostics != nullptr) {
      diagnostics->push_back(
          {pair.id, Strategy::kInstructionRewrite, k, errors[k]});
    }
  }
  return out;
}

std::string Expander::GenerateResponse(TaskKind task,
                                       std::string_view instruction,
                                       std::string_view seed_input,
                                       std::uint64_t request_seed) const {
  if (!IsGenerativeTask(task)) {
    throw Error(ErrorCode::kInvalidArgument,
                "response generation is restricted to generative tasks; got " +
                    std::string(TaskName(task)));
  }
  std::string text = client_->Complete(
      MakeRequest(ResponseGenerationPrompt(instruction, seed_input), request_seed));
  if (text.empty()) {
    throw Error(ErrorCode::kEmptyGeneration, "teacher returned no text");
  }
  return text;
}

std::string Expander::RewriteResponse(std::string_view response,
                                      std::uint64_t request_seed) const {
  if (response.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "response to rewrite is empty");
  }
  std::string text = client_->Complete(
      MakeRequest(ResponseRewritePrompt(response), request_seed));
  if (text.empty()) {
    throw Error(ErrorCode::kEmptyGeneration, "teacher returned no text");
  }
  return text;
}

ExpansionResult Expander::ExpandCorpus(std::span<const InstructionPair> seeds,
                                       const ExpansionPlan& plan) const {
  plan.Validate();
  if (seeds.empty()) throw Error(ErrorCode::kEmptyInput, "expand: no seeds");

  struct Job {
    std::size_t seed_index;
    Strategy strategy;
    std::size_t variant;
    std::optional<std::string> result;
    std::string error;
  };

  // Phase one: instruction rewrites and response rewrites are independent.
  std::vector<Job> phase1;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const TaskKind task = seeds[s].task;
    const bool rewrite_instructions =
        IsGenerativeTask(task) || plan.tasks_instruction_only.count(task) > 0;
    if (rewrite_instructions) {
      for (std::size_t k = 0; k < plan.variants.instruction_rewrite; ++k) {
        phase1.push_back({s, Strategy::kInstructionRewrite, k, {}, {}});
      }
    }
    if (IsGenerativeTask(task)) {
      for (std::size_t k = 0; k < plan.variants.response_rewrite; ++k) {
        phase1.push_back({s, Strategy::kResponseRewrite, k, {}, {}});
      }
    }
  }

  auto run = [&](Job& job) {
    const InstructionPair& seed = seeds[job.seed_index];
    const std::uint64_t request_seed =
        VariantSeed(plan.rng_seed, seed.id, job.strategy, job.variant);
    try {
      switch (job.strategy) {
        case Strategy::kInstructionRewrite: {
          std::string text = client_->Complete(MakeRequest(
              InstructionRewritePrompt(seed.instruction), request_seed));
          if (text.empty()) {
            throw Error(ErrorCode::kEmptyGeneration,
                        "empty instruction rewrite");
          }
          job.result = std::move(text);
          break;
        }
        case Strategy::kResponseRewrite:
          job.result = RewriteResponse(seed.output, request_seed);
          break;
        case Strategy::kResponseGeneration:
          break;  // handled in phase two
      }
    } catch (const Error& e) {
      job.error = e.what();
    }
  };
  ParallelFor(phase1.size(), config_.concurrency,
              [&](std::size_t i) { run(phase1[i]); });

  // Expanded instructions per seed, in variant order.
  std::vector<std::vector<std::string>> expanded(seeds.size());
  for (const Job& job : phase1) {
    if (job.strategy == Strategy::kInstructionRewrite && job.result) {
      expanded[job.seed_index].push_back(*job.result);
    }
  }

  // Phase two: responses to the expanded instructions (the seed instruction
  // stands in when no rewrite succeeded).
  std::vector<Job> phase2;
  std::vector<std::string> phase2_instruction;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (!IsGenerativeTask(seeds[s].task)) continue;
    for (std::size_t k = 0; k < plan.variants.response_generation; ++k) {
      phase2.push_back({s, Strategy::kResponseGeneration, k, {}, {}});
      phase2_instruction.push_back(
          expanded[s].empty() ? seeds[s].instruction
                              : expanded[s][k % expanded[s].size()]);
    }
  }
  ParallelFor(phase2.size(), config_.concurrency, [&](std::size_t i) {
    Job& job = phase2[i];
    const InstructionPair& seed = seeds[job.seed_index];
    try {
      job.result = GenerateResponse(
          seed.task, phase2_instruction[i], seed.input,
          VariantSeed(plan.rng_seed, seed.id, job.strategy, job.variant));
    } catch (const Error& e) {
      job.error = e.what();
    }
  });

  // Assemble in seed, strategy, variant order.
  std::vector<std::vector<const Job*>> by_seed(seeds.size());
  std::vector<std::vector<std::size_t>> phase2_index(seeds.size());
  for (const Job& job : phase1) by_seed[job.seed_index].push_back(&job);
  for (std::size_t i = 0; i < phase2.size(); ++i) {
    by_seed[phase2[i].seed_index].push_back(&phase2[i]);
    phase2_index[phase2[i].seed_index].push_back(i);
  }

  ExpansionResult result;
  result.calls_attempted = phase1.size() + phase2.size();
  std::size_t failures = 0;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const InstructionPair& seed = seeds[s];
    result.pairs.push_back(seed);
    for (Strategy strategy :
         {Strategy::kInstructionRewrite, Strategy::kResponseGeneration,
          Strategy::kResponseRewrite}) {
      std::size_t rg_ordinal = 0;
      for (const Job* job : by_seed[s]) {
        if (job->strategy != strategy) continue;
        if (!job->result) {
          ++failures;
          result.diagnostics.push_back(
              {seed.id, job->strategy, job->variant, job->error});
          if (strategy == Strategy::kResponseGeneration) ++rg_ordinal;
          continue;
        }
        InstructionPair v =
            MakeVariant(seed, job->strategy, job->variant, config_.model);
        switch (strategy) {
          case Strategy::kInstructionRewrite:
            v.instruction = *job->result;
            break;
          case Strategy::kResponseGeneration:
            v.instruction = phase2_instruction[phase2_index[s][rg_ordinal++]];
            v.output = *job->result;
            break;
          case Strategy::kResponseRewrite:
            v.output = *job->result;
            break;
        }
        result.pairs.push_back(std::move(v));
      }
    }
  }
  if (result.calls_attempted > 0 && failures == result.calls_attempted) {
    throw Error(ErrorCode::kAllCallsFailed,
                "expand: all " + std::to_string(failures) +
                    " teacher calls failed; first: " +
                    result.diagnostics.front().error);
  }
  return result;
}

}  // namespace forge
