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

#ifndef FORGE_CONFIG_H_
#define FORGE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "forge/expand.h"

namespace forge {

struct BackendSettings {
  std::string kind = "mock";  // mock | http | fixture
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model = "gpt-3.5-turbo-0301";
  std::string scorer_model = "gpt2-xl";
  std::string embed_model = "bert-base-uncased";
  std::string api_key_env = "FORGE_API_KEY";
  int timeout_s = 60;
  int max_retries = 3;
  int base_delay_ms = 500;
  std::size_t concurrency = 4;
  double temperature = 0.7;
  int max_tokens = 256;
  std::filesystem::path fixture;
};

struct PipelineSettings {
  std::size_t seed_per_task = 60;
  double split_ratio = 0.8;
  VariantCounts variants;
  std::size_t target_total = 1200;
  double near_dup_threshold = 0.9;
};

struct MetricSettings {
  double rouge_beta = 1.2;
  double bleu_epsilon = 1e-9;
};

struct PathSettings {
  std::filesystem::path data_in;
  std::filesystem::path qa_in;
  std::filesystem::path heldout_in;
  std::filesystem::path out_dir = "out";
  std::filesystem::path generations;  // directory of <task>.jsonl files
  std::filesystem::path replay;       // per-metric rows for replay mode
  std::filesystem::path ratings;
};

struct PipelineConfig {
  BackendSettings backend;
  PipelineSettings pipeline;
  MetricSettings metrics;
  std::uint64_t rng_seed = 20230808;
  PathSettings paths;

  nlohmann::json ToJson() const;
  // Hash of the canonical JSON form; independent of file formatting.
  std::string Hash() const;
  void Validate() const;
};

nlohmann::json DefaultConfigJson();

// Merges `user` over the defaults; unknown keys are rejected so typos fail
// loudly. Relative paths resolve against `base_dir`.
PipelineConfig ConfigFromJson(const nlohmann::json& user,
                              const std::filesystem::path& base_dir = {});

// "a.b.c=value": value is parsed as JSON when it parses, else taken as text.
void ApplyOverride(nlohmann::json& config, std::string_view assignment);

PipelineConfig LoadConfig(const std::filesystem::path& path,
                          std::span<const std::string> overrides = {});

}  // namespace forge

#endif  // FORGE_CONFIG_H_
