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

#ifndef FORGE_EVALUATE_H_
#define FORGE_EVALUATE_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/metrics.h"
#include "forge/modelio.h"
#include "forge/taxonomy.h"

namespace forge {

// Column order of the report, identical to the results table layout.
enum class Metric : std::uint8_t {
  kBlAt, kRlAt, kBlAd, kRlAd,
  kBlTt, kRlTt, kBlTq, kRlTq, kPpl,
  kPPt, kRPt, kF1Pt,
  kPQs, kRQs, kF1Qs,
  kBlQa, kRlQa, kBeQa,
};

inline constexpr std::size_t kPplIndex = static_cast<std::size_t>(Metric::kPpl);

std::span<const std::string_view> MetricNames();  // 18 names, "BL_At" ...

struct MetricReport {
  std::array<std::optional<double>, kMetricCount> values{};  // PPL is raw
  std::optional<double> gm;
  std::vector<std::string> missing_tasks;

  bool partial() const { return !missing_tasks.empty(); }

  std::optional<double>& at(Metric m) {
    return values[static_cast<std::size_t>(m)];
  }
  const std::optional<double>& at(Metric m) const {
    return values[static_cast<std::size_t>(m)];
  }

  // Fills gm when all 18 values are present and positive; clears it otherwise.
  void AssembleGm();

  nlohmann::json ToJson() const;  // 19 keys, null for absent values
  static MetricReport FromJson(const nlohmann::json& j);
};

// Replaces PPL by 1/ln PPL and takes the geometric mean.
double GmFromRaw(std::span<const double> raw_values);

// Aligned text table, one row per named report.
std::string RenderTable(
    std::span<const std::pair<std::string, MetricReport>> rows);

struct EvalReference {
  std::string id;
  TaskKind task = TaskKind::kAdsGeneration;
  // ads: {title, description}; title_rewriting: {title, query};
  // general_qa: {answer}; classification tasks: empty.
  std::vector<std::string> texts;
  std::optional<TaxonomyLabel> label;

  nlohmann::json ToJson() const;
  static EvalReference FromJson(const nlohmann::json& j);
};

struct EvalGeneration {
  std::string id;
  std::string text;
};

struct EvalInput {
  std::map<TaskKind, std::vector<EvalReference>> references;
  std::map<TaskKind, std::vector<EvalGeneration>> generations;
};

struct EvalOptions {
  std::string ppl_model = "gpt2-xl";
  std::string embed_model = "bert-base-uncased";
  double bleu_epsilon = kDefaultBleuEpsilon;
  double rouge_beta = kDefaultRougeBeta;
  std::size_t concurrency = 4;
};

// Averages sentence metrics over samples. A task with no generations is
// reported missing and the GM is withheld. Ids must align one to one with
// the references of that task.
MetricReport EvaluateRun(const EvalInput& input, const ModelClient& scorer,
                         const EvalOptions& options);

std::vector<EvalReference> LoadReferences(const std::filesystem::path& path);
std::vector<EvalGeneration> LoadGenerations(const std::filesystem::path& path);

struct ReplayRow {
  std::string model;
  std::array<double, kMetricCount> values{};  // PPL raw
  std::optional<double> expected_gm;
};

std::vector<ReplayRow> LoadReplay(const std::filesystem::path& path);
std::vector<ReplayRow> ReplayFromJson(const nlohmann::json& j);
MetricReport ReplayReport(const ReplayRow& row);

}  // namespace forge

#endif  // FORGE_EVALUATE_H_
