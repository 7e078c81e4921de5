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

#include "forge/config.h"

#include <fstream>

#include "forge/error.h"
#include "forge/hash.h"

namespace forge {

using nlohmann::json;

namespace {

void MergeStrict(json& base, const json& user, const std::string& where) {
  if (!user.is_object()) {
    throw Error(ErrorCode::kConfig, where + " must be an object");
  }
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) {
      throw Error(ErrorCode::kConfig, "unknown config key " + key);
    }
    json& slot = base[it.key()];
    if (slot.is_object()) {
      MergeStrict(slot, it.value(), key);
    } else {
      slot = it.value();
    }
  }
}

template <typename T>
T Get(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfig, std::string("config key ") + section + "." +
                                        key + " has the wrong type");
  }
}

std::filesystem::path Resolve(const std::string& value,
                              const std::filesystem::path& base_dir) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal();
}

}  // namespace

json DefaultConfigJson() {
  const PipelineConfig d;
  return d.ToJson();
}

json PipelineConfig::ToJson() const {
  return json{
      {"backend",
       {{"kind", backend.kind},
        {"base_url", backend.base_url},
        {"model", backend.model},
        {"scorer_model", backend.scorer_model},
        {"embed_model", backend.embed_model},
        {"api_key_env", backend.api_key_env},
        {"timeout_s", backend.timeout_s},
        {"max_retries", backend.max_retries},
        {"base_delay_ms", backend.base_delay_ms},
        {"concurrency", backend.concurrency},
        {"temperature", backend.temperature},
        {"max_tokens", backend.max_tokens},
        {"fixture", backend.fixture.string()}}},
      {"pipeline",
       {{"seed_per_task", pipeline.seed_per_task},
        {"split_ratio", pipeline.split_ratio},
        {"variants",
         {{"instruction_rewrite", pipeline.variants.instruction_rewrite},
          {"response_generation", pipeline.variants.response_generation},
          {"response_rewrite", pipeline.variants.response_rewrite}}},
        {"target_total", pipeline.target_total},
        {"near_dup_threshold", pipeline.near_dup_threshold}}},
      {"metrics",
       {{"rouge_beta", metrics.rouge_beta}, {"bleu_epsilon", metrics.bleu_epsilon}}},
      {"rng_seed", rng_seed},
      {"paths",
       {{"data_in", paths.data_in.string()},
        {"qa_in", paths.qa_in.string()},
        {"heldout_in", paths.heldout_in.string()},
        {"out_dir", paths.out_dir.string()},
        {"generations", paths.generations.string()},
        {"replay", paths.replay.string()},
        {"ratings", paths.ratings.string()}}},
  };
}

std::string PipelineConfig::Hash() const { return Sha256Hex(ToJson().dump()); }

void PipelineConfig::Validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kConfig, m); };
  if (backend.kind != "mock" && backend.kind != "http" && backend.kind != "fixture") {
    fail("backend.kind must be mock, http or fixture");
  }
  if (backend.concurrency < 1) fail("backend.concurrency must be at least 1");
  if (backend.timeout_s < 1) fail("backend.timeout_s must be at least 1");
  if (backend.max_retries < 0 || backend.max_retries > RetryPolicy::kMaxRetriesLimit) {
    fail("backend.max_retries must be in [0, 10]");
  }
  if (backend.base_delay_ms < 0) fail("backend.base_delay_ms must be >= 0");
  if (backend.max_tokens < 1) fail("backend.max_tokens must be at least 1");
  if (backend.temperature < 0) fail("backend.temperature must be >= 0");
  if (!(pipeline.split_ratio > 0 && pipeline.split_ratio < 1)) {
    fail("pipeline.split_ratio must be in (0, 1)");
  }
  if (!(pipeline.near_dup_threshold >= 0 && pipeline.near_dup_threshold <= 1)) {
    fail("pipeline.near_dup_threshold must be in [0, 1]");
  }
  if (pipeline.target_total % 5 != 0) {
    fail("pipeline.target_total must be divisible by 5");
  }
  if (!(metrics.rouge_beta > 0)) fail("metrics.rouge_beta must be positive");
  if (!(metrics.bleu_epsilon > 0)) fail("metrics.bleu_epsilon must be positive");
  if (paths.out_dir.empty()) fail("paths.out_dir is required");
}

PipelineConfig ConfigFromJson(const json& user,
                              const std::filesystem::path& base_dir) {
  json j = DefaultConfigJson();
  MergeStrict(j, user, "");

  // Counts arrive as JSON numbers; reject negatives before the unsigned read.
  auto count = [&](const json& v, const std::string& key) -> std::size_t {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw Error(ErrorCode::kConfig, key + " must be a non-negative integer");
    }
    return v.get<std::size_t>();
  };

  PipelineConfig c;
  c.backend.kind = Get<std::string>(j, "backend", "kind");
  c.backend.base_url = Get<std::string>(j, "backend", "base_url");
  c.backend.model = Get<std::string>(j, "backend", "model");
  c.backend.scorer_model = Get<std::string>(j, "backend", "scorer_model");
  c.backend.embed_model = Get<std::string>(j, "backend", "embed_model");
  c.backend.api_key_env = Get<std::string>(j, "backend", "api_key_env");
  c.backend.timeout_s = Get<int>(j, "backend", "timeout_s");
  c.backend.max_retries = Get<int>(j, "backend", "max_retries");
  c.backend.base_delay_ms = Get<int>(j, "backend", "base_delay_ms");
  c.backend.concurrency = count(j["backend"]["concurrency"], "backend.concurrency");
  c.backend.temperature = Get<double>(j, "backend", "temperature");
  c.backend.max_tokens = Get<int>(j, "backend", "max_tokens");
  c.backend.fixture = Resolve(Get<std::string>(j, "backend", "fixture"), base_dir);

  const json& p = j["pipeline"];
  c.pipeline.seed_per_task = count(p["seed_per_task"], "pipeline.seed_per_task");
  c.pipeline.split_ratio = Get<double>(j, "pipeline", "split_ratio");
  const json& v = p["variants"];
  c.pipeline.variants.instruction_rewrite =
      count(v["instruction_rewrite"], "pipeline.variants.instruction_rewrite");
  c.pipeline.variants.response_generation =
      count(v["response_generation"], "pipeline.variants.response_generation");
  c.pipeline.variants.response_rewrite =
      count(v["response_rewrite"], "pipeline.variants.response_rewrite");
  c.pipeline.target_total = count(p["target_total"], "pipeline.target_total");
  c.pipeline.near_dup_threshold = Get<double>(j, "pipeline", "near_dup_threshold");

  c.metrics.rouge_beta = Get<double>(j, "metrics", "rouge_beta");
  c.metrics.bleu_epsilon = Get<double>(j, "metrics", "bleu_epsilon");

  if (!j["rng_seed"].is_number_unsigned() && !j["rng_seed"].is_number_integer()) {
    throw Error(ErrorCode::kConfig, "rng_seed must be an integer");
  }
  c.rng_seed = j["rng_seed"].get<std::uint64_t>();

  c.paths.data_in = Resolve(Get<std::string>(j, "paths", "data_in"), base_dir);
  c.paths.qa_in = Resolve(Get<std::string>(j, "paths", "qa_in"), base_dir);
  c.paths.heldout_in = Resolve(Get<std::string>(j, "paths", "heldout_in"), base_dir);
  c.paths.out_dir = Resolve(Get<std::string>(j, "paths", "out_dir"), base_dir);
  c.paths.generations = Resolve(Get<std::string>(j, "paths", "generations"), base_dir);
  c.paths.replay = Resolve(Get<std::string>(j, "paths", "replay"), base_dir);
  c.paths.ratings = Resolve(Get<std::string>(j, "paths", "ratings"), base_dir);
  c.Validate();
  return c;
}

void ApplyOverride(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorCode::kConfig, "override must look like key=value: " +
                                        std::string(assignment));
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos
                                                   ? std::string::npos
                                                   : dot - start);
    if (part.empty()) throw Error(ErrorCode::kConfig, "bad override key " + key);
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

PipelineConfig LoadConfig(const std::filesystem::path& path,
                          std::span<const std::string> overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot read config " + path.string());
  json user = json::parse(in, nullptr, false, /*ignore_comments=*/true);
  if (user.is_discarded()) {
    throw Error(ErrorCode::kConfig, path.string() + " is not valid JSON");
  }
  for (const auto& o : overrides) ApplyOverride(user, o);
  return ConfigFromJson(user, path.parent_path());
}

}  // namespace forge
