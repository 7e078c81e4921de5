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

#include "forge/pipeline.h"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "forge/curate.h"
#include "forge/error.h"
#include "forge/evaluate.h"
#include "forge/expand.h"
#include "forge/formulate.h"
#include "forge/hash.h"
#include "forge/human_eval.h"
#include "forge/ingest.h"
#include "forge/lora.h"
#include "forge/rng.h"
#include "forge/synthetic_teacher.h"

namespace forge {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

void WriteText(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << bytes;
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

void WriteJson(const fs::path& path, const json& j) {
  WriteText(path, j.dump(2) + "\n");
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
}

void RequireInput(const fs::path& path, const char* what) {
  if (path.empty()) {
    throw Error(ErrorCode::kConfig, std::string("paths.") + what + " is not set");
  }
}

json RecordToJson(const ProductRecord& r) {
  return json{{"id", r.id},
              {"title", r.title},
              {"description", r.description ? json(*r.description) : json(nullptr)},
              {"taxonomy", r.taxonomy.name()},
              {"query", r.query ? json(*r.query) : json(nullptr)},
              {"action", ActionName(r.action)}};
}

// Adds this stage's outputs to the run manifest, keeping other stages.
void RecordStage(const PipelineConfig& config, const std::string& stage,
                 const std::vector<fs::path>& outputs, double seconds) {
  const fs::path path = config.paths.out_dir / kRunManifestName;
  json manifest = json::object();
  if (std::ifstream in(path); in) {
    manifest = json::parse(in, nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object()) manifest = json::object();
  }
  const std::string hash = config.Hash();
  manifest["run_id"] = hash.substr(0, 16);
  manifest["config_sha256"] = hash;
  json files = json::object();
  for (const auto& out : outputs) {
    files[fs::relative(out, config.paths.out_dir).generic_string()] =
        Sha256File(out);
  }
  manifest["stages"][stage] = json{{"outputs", files}, {"seconds", seconds}};
  WriteJson(path, manifest);
}

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Hex(const Eigen::MatrixXd& m) {
  return Sha256Hex(std::string_view(reinterpret_cast<const char*>(m.data()),
                                    static_cast<std::size_t>(m.size()) * sizeof(double)));
}

Eigen::MatrixXd RandomMatrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.Normal();
  }
  return m;
}

}  // namespace

RunLock::RunLock(const fs::path& out_dir) : path_(out_dir / ".forge.lock") {
  EnsureDir(out_dir);
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kLocked,
                "another forge command holds " + path_.string());
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

RunLock::~RunLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

RetryPolicy MakeRetryPolicy(const PipelineConfig& config) {
  RetryPolicy policy;
  policy.max_retries = config.backend.max_retries;
  policy.base_delay = std::chrono::milliseconds(config.backend.base_delay_ms);
  policy.Validate();
  return policy;
}

std::unique_ptr<Backend> MakeBackend(const PipelineConfig& config) {
  const auto& b = config.backend;
  if (b.kind == "mock") {
    MockOptions options;
    options.fallback = SyntheticTeacher;
    return std::make_unique<MockBackend>(std::move(options));
  }
  if (b.kind == "fixture") {
    if (b.fixture.empty()) {
      throw Error(ErrorCode::kConfig, "backend.fixture is required for kind fixture");
    }
    return std::make_unique<FixtureBackend>(FixtureBackend::Load(b.fixture));
  }
  HttpBackendConfig http;
  http.base_url = b.base_url;
  http.api_key_env = b.api_key_env;
  http.timeout_s = b.timeout_s;
  return std::make_unique<HttpBackend>(http);
}

StageResult CmdFormulate(const PipelineConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  RequireInput(config.paths.data_in, "data_in");
  EnsureDir(config.paths.out_dir);
  RunLock lock(config.paths.out_dir);
  const fs::path& out = config.paths.out_dir;
  StageResult result;

  LoadResult loaded = LoadInteractions(config.paths.data_in);
  const fs::path errors = out / "interactions.errors.jsonl";
  WriteDiagnostics(errors, loaded.diagnostics);
  const auto kept = FilterByAction(loaded.records);
  const DatasetSplit split =
      Split(kept, config.pipeline.split_ratio, DeriveSeed(config.rng_seed, "split"));

  std::vector<QaPair> qa;
  if (!config.paths.qa_in.empty()) qa = LoadQaPairs(config.paths.qa_in);
  std::vector<std::size_t> qa_order(qa.size());
  for (std::size_t i = 0; i < qa_order.size(); ++i) qa_order[i] = i;
  Rng qa_rng(DeriveSeed(config.rng_seed, "qa-split"));
  qa_rng.Shuffle(std::span<std::size_t>(qa_order));
  const auto qa_train_n = static_cast<std::size_t>(
      std::ceil(config.pipeline.split_ratio * static_cast<double>(qa.size()) - 1e-9));
  std::vector<QaPair> qa_train;
  for (std::size_t i = 0; i < qa_train_n; ++i) qa_train.push_back(qa[qa_order[i]]);

  const auto seeds = BuildSeedSet(split.train, qa_train,
                                  config.pipeline.seed_per_task, config.rng_seed);
  const fs::path seeds_path = out / "seeds.jsonl";
  EmitJsonl(seeds, seeds_path);

  std::string test_rows;
  std::string ref_rows;
  auto add_ref = [&](const EvalReference& ref) {
    ref_rows += ref.ToJson().dump() + "\n";
  };
  for (const auto& r : split.test) {
    test_rows += RecordToJson(r).dump() + "\n";
    add_ref({r.id, TaskKind::kAdsGeneration,
             {r.title, r.description.value_or(r.title)}, std::nullopt});
    if (r.query) {
      add_ref({r.id, TaskKind::kTitleRewriting, {r.title, *r.query}, std::nullopt});
    }
    add_ref({r.id, TaskKind::kProductClassification, {}, r.taxonomy});
    if (r.query) add_ref({r.id, TaskKind::kIntentSpeculation, {}, r.taxonomy});
  }
  for (std::size_t i = qa_train_n; i < qa.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "qa-%04zu", qa_order[i]);
    add_ref({id, TaskKind::kGeneralQa, {qa[qa_order[i]].answer}, std::nullopt});
  }
  const fs::path test_path = out / "test.jsonl";
  const fs::path ref_path = out / "references.jsonl";
  WriteText(test_path, test_rows);
  WriteText(ref_path, ref_rows);

  result.outputs = {seeds_path, test_path, ref_path, errors};
  log << "formulate: " << loaded.records.size() << " records, "
      << loaded.diagnostics.size() << " rejected lines, " << kept.size()
      << " after action filter, train " << split.train.size() << " / test "
      << split.test.size() << "\n";
  log << "formulate: " << seeds.size() << " seed pairs -> " << seeds_path.string()
      << "\n";
  if (!loaded.diagnostics.empty()) result.exit_code = kExitPartial;
  RecordStage(config, "formulate", result.outputs, Since(start));
  return result;
}

StageResult CmdExpand(const PipelineConfig& config, Backend& backend,
                      std::ostream& log) {
  const auto start = Clock::now();
  RunLock lock(config.paths.out_dir);
  const fs::path& out = config.paths.out_dir;
  const auto seeds = LoadPairs(out / "seeds.jsonl");

  ModelClient client(backend, MakeRetryPolicy(config));
  TeacherConfig teacher;
  teacher.model = config.backend.model;
  teacher.decoding = {config.backend.temperature, config.backend.max_tokens};
  teacher.concurrency = config.backend.concurrency;
  Expander expander(client, teacher);
  ExpansionPlan plan;
  plan.variants = config.pipeline.variants;
  plan.rng_seed = config.rng_seed;
  const ExpansionResult expanded = expander.ExpandCorpus(seeds, plan);

  const fs::path pairs_path = out / "expanded.jsonl";
  const fs::path diag_path = out / "diagnostics.jsonl";
  EmitJsonl(expanded.pairs, pairs_path);
  std::string diag;
  for (const auto& d : expanded.diagnostics) {
    diag += json{{"seed_id", d.seed_id},
                 {"strategy", StrategyName(d.strategy)},
                 {"variant", d.variant},
                 {"error", d.error}}
                .dump() +
            "\n";
  }
  WriteText(diag_path, diag);

  StageResult result;
  result.outputs = {pairs_path, diag_path};
  result.exit_code = expanded.partial() ? kExitPartial : kExitClean;
  log << "expand: " << seeds.size() << " seeds -> " << expanded.pairs.size()
      << " pairs (" << expanded.calls_attempted << " teacher calls, "
      << expanded.diagnostics.size() << " failed)\n";
  RecordStage(config, "expand", result.outputs, Since(start));
  return result;
}

StageResult CmdCurate(const PipelineConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  RunLock lock(config.paths.out_dir);
  const fs::path& out = config.paths.out_dir;
  const auto pairs = LoadPairs(out / "expanded.jsonl");
  const auto unique = Dedup(pairs, config.pipeline.near_dup_threshold);

  CurationConfig curation;
  curation.near_dup_threshold = config.pipeline.near_dup_threshold;
  curation.target_total = config.pipeline.target_total;
  curation.rng_seed = config.rng_seed;
  const auto balanced = Balance(unique, curation);

  StageResult result;
  const fs::path dataset_path = out / "dataset.jsonl";
  const Manifest manifest = EmitJsonl(balanced, dataset_path);
  const fs::path manifest_path = out / "manifest.json";
  WriteJson(manifest_path, manifest.ToJson());
  result.outputs = {dataset_path, manifest_path};

  if (!config.paths.heldout_in.empty()) {
    std::ifstream in(config.paths.heldout_in, std::ios::binary);
    if (!in) {
      throw Error(ErrorCode::kFileUnreadable,
                  "cannot read " + config.paths.heldout_in.string());
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kMalformedInput,
                  config.paths.heldout_in.string() + " is not JSON");
    }
    const HeldoutInputs inputs = HeldoutInputsFromJson(j);
    std::set<std::string> dataset_ids;
    for (const auto& p : balanced) dataset_ids.insert(p.id);
    for (HeldoutKind kind : {HeldoutKind::kScenarioAds, HeldoutKind::kRecommendation}) {
      const bool have = kind == HeldoutKind::kScenarioAds
                            ? !inputs.scenarios.empty() && !inputs.product_sets.empty()
                            : !inputs.intents.empty();
      if (!have) continue;
      const auto pack = BuildHeldoutPacks(kind, inputs);
      for (const auto& p : pack) {
        if (dataset_ids.count(p.id)) {
          throw Error(ErrorCode::kInvalidArgument,
                      "held-out id " + p.id + " collides with the dataset");
        }
      }
      const fs::path path =
          out / ("heldout_" + std::string(HeldoutKindName(kind)) + ".jsonl");
      EmitHeldoutPack(pack, path);
      result.outputs.push_back(path);
      log << "curate: " << pack.size() << " held-out prompts -> " << path.string()
          << "\n";
    }
  }

  log << "curate: " << pairs.size() << " pairs, " << unique.size()
      << " after dedup, " << balanced.size() << " balanced (";
  bool first = true;
  for (const auto& [task, n] : manifest.per_task) {
    log << (first ? "" : ", ") << task << " " << n;
    first = false;
  }
  log << ")\n";
  RecordStage(config, "curate", result.outputs, Since(start));
  return result;
}

StageResult CmdEvaluate(const PipelineConfig& config, Backend& backend,
                        std::ostream& log) {
  const auto start = Clock::now();
  RunLock lock(config.paths.out_dir);
  const fs::path& out = config.paths.out_dir;
  StageResult result;
  const fs::path report_path = out / "report.json";
  const fs::path table_path = out / "report.txt";
  std::vector<std::pair<std::string, MetricReport>> rows;

  if (!config.paths.replay.empty()) {
    json j = json::object();
    json list = json::array();
    for (const auto& row : LoadReplay(config.paths.replay)) {
      MetricReport report = ReplayReport(row);
      json entry{{"model", row.model}, {"report", report.ToJson()}};
      if (row.expected_gm) {
        entry["expected_gm"] = *row.expected_gm;
        entry["abs_diff"] = std::abs(*report.gm - *row.expected_gm);
      }
      list.push_back(std::move(entry));
      rows.emplace_back(row.model, std::move(report));
    }
    j["rows"] = std::move(list);
    WriteJson(report_path, j);
  } else {
    RequireInput(config.paths.generations, "generations");
    EvalInput input;
    for (auto& ref : LoadReferences(out / "references.jsonl")) {
      input.references[ref.task].push_back(std::move(ref));
    }
    for (TaskKind task : kAllTasks) {
      const fs::path path =
          config.paths.generations / (std::string(TaskName(task)) + ".jsonl");
      if (fs::exists(path)) input.generations[task] = LoadGenerations(path);
    }
    ModelClient scorer(backend, MakeRetryPolicy(config));
    EvalOptions options;
    options.ppl_model = config.backend.scorer_model;
    options.embed_model = config.backend.embed_model;
    options.bleu_epsilon = config.metrics.bleu_epsilon;
    options.rouge_beta = config.metrics.rouge_beta;
    options.concurrency = config.backend.concurrency;
    MetricReport report = EvaluateRun(input, scorer, options);
    if (report.partial()) {
      result.exit_code = kExitPartial;
      for (const auto& t : report.missing_tasks) {
        log << "evaluate: no generations for task " << t << "\n";
      }
    }
    WriteJson(report_path, report.ToJson());
    rows.emplace_back(config.backend.model, std::move(report));
  }
  const std::string table = RenderTable(rows);
  WriteText(table_path, table);
  log << table;
  result.outputs = {report_path, table_path};
  RecordStage(config, "evaluate", result.outputs, Since(start));
  return result;
}

StageResult CmdLoraVerify(const PipelineConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  RunLock lock(config.paths.out_dir);
  Rng rng(DeriveSeed(config.rng_seed, "lora-verify"));
  json checks = json::array();
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    log << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    checks.push_back(json{{"property", name}, {"pass", ok}, {"detail", detail}});
    all_ok = all_ok && ok;
  };
  char buf[160];

  {
    double worst = 0.0;
    bool zero_b = true;
    for (int t = 0; t < 100; ++t) {
      const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.UniformBelow(16));
      const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng.UniformBelow(16));
      const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.UniformBelow(
                                     static_cast<std::uint64_t>(std::min(d, k))));
      const LoraAdapter ad = LoraInit(d, k, r, rng.Next());
      zero_b = zero_b && ad.b.isZero(0.0);
      const Eigen::MatrixXd w0 = RandomMatrix(rng, d, k);
      const Eigen::VectorXd x = RandomMatrix(rng, k, 1);
      const Eigen::VectorXd base = w0 * x;
      const double err = (LoraForward(w0, ad, x) - base).norm() /
                         std::max(base.norm(), 1e-300);
      worst = std::max(worst, err);
    }
    std::snprintf(buf, sizeof(buf), "B == 0 on 100 inits, max rel err %.3g", worst);
    report("zero-init", zero_b && worst <= 1e-12, buf);
  }
  {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      LoraAdapter ad = LoraInit(12, 9, 3, rng.Next(), 0.5);
      ad.b = RandomMatrix(rng, 12, 3);
      const Eigen::MatrixXd w0 = RandomMatrix(rng, 12, 9);
      const Eigen::VectorXd x = RandomMatrix(rng, 9, 1);
      const Eigen::VectorXd dense = (w0 + ad.b * ad.a) * x;
      worst = std::max(worst, (LoraForward(w0, ad, x) - dense).norm() /
                                  std::max(dense.norm(), 1e-300));
    }
    std::snprintf(buf, sizeof(buf), "max rel err vs (W0 + BA)x %.3g", worst);
    report("dense-equivalence", worst <= 1e-12, buf);
  }
  {
    LoraAdapter ad = LoraInit(8, 8, 2, rng.Next(), 0.5);
    ad.b = RandomMatrix(rng, 8, 2);
    const Eigen::MatrixXd w0 = RandomMatrix(rng, 8, 8);
    const Eigen::VectorXd x = RandomMatrix(rng, 8, 1);
    const Eigen::VectorXd y = RandomMatrix(rng, 8, 1);
    const double err = GradCheck(w0, ad, x, y, 1e-5);
    std::snprintf(buf, sizeof(buf), "d=k=8 r=2 eps=1e-5 max rel err %.3g", err);
    report("grad-check", err <= 1e-4, buf);
  }
  {
    struct Row {
      const char* name;
      std::uint64_t layers, d_model, expected;
      const char* table;
    };
    const Row table2[] = {{"7b", 32, 4096, 8388608, "8.39m"},
                          {"13b", 40, 5120, 13107200, "13.11m"},
                          {"30b", 60, 6656, 25559040, "25.56m"}};
    for (const auto& row : table2) {
      AdapterTargetSet targets;
      targets.n_layers = row.layers;
      const std::uint64_t n = LoraParamCount(row.d_model, 8, targets);
      std::snprintf(buf, sizeof(buf), "%llu trainable (%.2fm, table %s)",
                    static_cast<unsigned long long>(n), static_cast<double>(n) / 1e6,
                    row.table);
      report(std::string("param-count-") + row.name, n == row.expected, buf);
    }
  }
  {
    const Eigen::Index d = 16, r = 2;
    const Eigen::MatrixXd w0 = RandomMatrix(rng, d, d);
    const Eigen::MatrixXd delta =
        0.5 * RandomMatrix(rng, d, r) * RandomMatrix(rng, r, d) / std::sqrt(double(d));
    const std::string before = Hex(w0);
    const FitResult fit = AdapterFitToy(w0, w0 + delta, r, 500, 0.05, rng.Next(), 0.1);
    const double drop = 1.0 - fit.losses.back() / fit.losses.front();
    const bool frozen = Hex(w0) == before;
    std::snprintf(buf, sizeof(buf), "loss %.4g -> %.4g (%.2f%% reduction), W0 %s",
                  fit.losses.front(), fit.losses.back(), 100.0 * drop,
                  frozen ? "unchanged" : "MODIFIED");
    report("toy-fit", drop >= 0.99 && frozen, buf);
  }

  const fs::path path = config.paths.out_dir / "lora_verify.json";
  WriteJson(path, json{{"checks", checks}, {"pass", all_ok}});
  StageResult result;
  result.outputs = {path};
  result.exit_code = all_ok ? kExitClean : kExitFailure;
  RecordStage(config, "lora-verify", result.outputs, Since(start));
  return result;
}

StageResult CmdHumanEval(const PipelineConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  RequireInput(config.paths.ratings, "ratings");
  RunLock lock(config.paths.out_dir);
  const auto ratings = LoadRatings(config.paths.ratings);
  const HumanEvalReport report = HumanEvalSummary(ratings);
  const fs::path path = config.paths.out_dir / "human_eval.json";
  WriteJson(path, report.ToJson());
  for (const auto& [task, dist] : report.per_task) {
    log << TaskName(task) << " (" << dist.total << " ratings):";
    for (std::size_t i = 0; i < kRateCount; ++i) {
      char cell[32];
      std::snprintf(cell, sizeof(cell), " %c %.3f", RateLetter(static_cast<Rate>(i)),
                    dist.fractions[i]);
      log << cell;
    }
    log << "\n";
  }
  StageResult result;
  result.outputs = {path};
  RecordStage(config, "human-eval", result.outputs, Since(start));
  return result;
}

int VerifyRun(const fs::path& out_dir, std::ostream& log) {
  const fs::path path = out_dir / kRunManifestName;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  json manifest = json::parse(in, nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("stages")) {
    throw Error(ErrorCode::kMalformedInput, path.string() + " is not a run manifest");
  }
  int bad = 0;
  for (const auto& [stage, entry] : manifest["stages"].items()) {
    for (const auto& [file, hash] : entry["outputs"].items()) {
      const fs::path target = out_dir / file;
      std::string actual;
      if (fs::exists(target)) actual = Sha256File(target);
      const bool ok = actual == hash.get<std::string>();
      if (!ok) ++bad;
      log << (ok ? "ok       " : "MISMATCH ") << stage << " " << file << "\n";
    }
  }
  return bad == 0 ? kExitClean : kExitFailure;
}

}  // namespace forge
