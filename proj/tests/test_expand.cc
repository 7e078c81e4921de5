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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "forge/error.h"
#include "forge/expand.h"
#include "forge/prompts.h"
#include "forge/synthetic_teacher.h"

namespace {

using forge::InstructionPair;
using forge::Strategy;
using forge::TaskKind;

InstructionPair Seed(std::string id, TaskKind task, std::string output) {
  InstructionPair p;
  p.id = std::move(id);
  p.task = task;
  p.instruction = "Do the " + std::string(forge::TaskName(task)) + " thing for this item.";
  p.input = "item " + p.id;
  p.output = std::move(output);
  return p;
}

std::vector<InstructionPair> OnePerTask() {
  std::vector<InstructionPair> seeds;
  int i = 0;
  for (TaskKind task : forge::kAllTasks) {
    seeds.push_back(Seed("s" + std::to_string(i++), task,
                         forge::IsClassificationTask(task) ? "home and living" : "reply text"));
  }
  return seeds;
}

forge::MockOptions TeacherMock() {
  forge::MockOptions options;
  options.fallback = forge::SyntheticTeacher;
  return options;
}

// Counts in-flight calls and remembers the peak.
class ProbeBackend : public forge::Backend {
 public:
  forge::BackendResponse Call(const forge::BackendRequest& request) override {
    const int now = ++in_flight_;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
    --in_flight_;
    forge::BackendResponse r;
    r.text = forge::SyntheticTeacher(request);
    return r;
  }
  std::atomic<int> peak{0};

 private:
  std::atomic<int> in_flight_{0};
};

// Rejects every response-rewrite prompt with a non-retryable status.
class RejectRewrites : public forge::Backend {
 public:
  forge::BackendResponse Call(const forge::BackendRequest& request) override {
    if (request.text.find(forge::kResponseRewriteHeader) != std::string::npos) {
      throw forge::BackendError(forge::ErrorCode::kTransport, 400, "rejected");
    }
    forge::BackendResponse r;
    r.text = forge::SyntheticTeacher(request);
    return r;
  }
};

class AlwaysDown : public forge::Backend {
 public:
  forge::BackendResponse Call(const forge::BackendRequest&) override {
    throw forge::BackendError(forge::ErrorCode::kTransport, 400, "down");
  }
};

// Closed-form count from the strategy rules: a generative seed gains every
// strategy, an instruction-only classification seed gains rewrites only.
std::size_t CountOracle(const std::vector<InstructionPair>& seeds,
                        const forge::ExpansionPlan& plan) {
  std::size_t n = seeds.size();
  for (const auto& s : seeds) {
    if (!forge::IsClassificationTask(s.task)) {
      n += plan.variants.instruction_rewrite + plan.variants.response_generation +
           plan.variants.response_rewrite;
    } else if (plan.tasks_instruction_only.count(s.task)) {
      n += plan.variants.instruction_rewrite;
    }
  }
  return n;
}

}  // namespace

TEST_SUITE("expand") {
  TEST_CASE("one seed per task with one variant each gives sixteen pairs") {
    forge::MockBackend mock(TeacherMock());
    forge::ModelClient client(mock, {});
    forge::Expander expander(client, {});
    forge::ExpansionPlan plan;
    plan.variants = {1, 1, 1};
    const auto seeds = OnePerTask();
    auto result = expander.ExpandCorpus(seeds, plan);
    CHECK(result.pairs.size() == 16);
    CHECK_FALSE(result.partial());
    CHECK(result.calls_attempted == 11);
  }

  TEST_CASE("zero variants returns the seeds unchanged") {
    forge::MockBackend mock(TeacherMock());
    forge::ModelClient client(mock, {});
    forge::Expander expander(client, {});
    forge::ExpansionPlan plan;
    plan.variants = {0, 0, 0};
    const auto seeds = OnePerTask();
    auto result = expander.ExpandCorpus(seeds, plan);
    CHECK(result.pairs == seeds);
  }

  TEST_CASE("three distinct rewrites keep input and output") {
    forge::MockOptions options;
    int n = 0;
    options.fallback = [&n](const forge::BackendRequest&) {
      return "variant number " + std::to_string(n++);
    };
    forge::MockBackend mock(options);
    forge::ModelClient client(mock, {});
    forge::TeacherConfig cfg;
    cfg.concurrency = 1;
    forge::Expander expander(client, cfg);
    const auto seed = Seed("s0", TaskKind::kAdsGeneration, "buy it");
    auto variants = expander.RewriteInstruction(seed, 3, 1);
    REQUIRE(variants.size() == 3);
    std::set<std::string> texts;
    for (const auto& v : variants) {
      texts.insert(v.instruction);
      CHECK(v.input == seed.input);
      CHECK(v.output == seed.output);
      CHECK(v.task == seed.task);
      CHECK(v.provenance.origin == forge::Origin::kExpanded);
      CHECK(v.provenance.strategy == Strategy::kInstructionRewrite);
      CHECK(v.provenance.seed_id == seed.id);
    }
    CHECK(texts.size() == 3);
  }

  TEST_CASE("echo mock yields the seed instruction back") {
    forge::MockOptions options;
    options.fallback = forge::EchoPayload;
    forge::MockBackend mock(options);
    forge::ModelClient client(mock, {});
    forge::Expander expander(client, {});
    const auto seed = Seed("s0", TaskKind::kTitleRewriting, "short title");
    auto variants = expander.RewriteInstruction(seed, 1, 1);
    REQUIRE(variants.size() == 1);
    CHECK(variants[0].instruction == seed.instruction);
  }

  TEST_CASE("generate and rewrite response") {
    forge::MockOptions options;
    options.completions[forge::ResponseGenerationPrompt("Write an ad.", "salt lamp")] = "Buy now!";
    options.completions[forge::ResponseRewritePrompt("Buy now!")] = "Get yours today!";
    forge::MockBackend mock(options);
    forge::ModelClient client(mock, {});
    forge::Expander expander(client, {});
    CHECK(expander.GenerateResponse(TaskKind::kAdsGeneration, "Write an ad.", "salt lamp", 1) ==
          "Buy now!");
    CHECK(expander.RewriteResponse("Buy now!", 1) == "Get yours today!");
    CHECK_THROWS_AS(expander.GenerateResponse(TaskKind::kProductClassification, "Classify.",
                                              "salt lamp", 1),
                    forge::Error);
    CHECK_THROWS_AS(expander.RewriteResponse("", 1), forge::Error);

    forge::MockOptions blank;
    blank.fallback = [](const forge::BackendRequest&) { return std::string("  "); };
    forge::MockBackend blank_mock(blank);
    forge::ModelClient blank_client(blank_mock, {});
    forge::Expander blank_expander(blank_client, {});
    try {
      blank_expander.GenerateResponse(TaskKind::kGeneralQa, "Answer.", "", 1);
      FAIL("expected EmptyGeneration");
    } catch (const forge::Error& e) {
      CHECK(e.code() == forge::ErrorCode::kEmptyGeneration);
    }
  }

  TEST_CASE("fixture-replayed teacher exchanges come back byte-equal") {
    auto fixture = forge::FixtureBackend::Load(FORGE_FIXTURE_DIR "/teacher_exchange.jsonl");
    forge::ModelClient client(fixture, {});
    forge::Expander expander(client, {});
    CHECK(expander.GenerateResponse(TaskKind::kAdsGeneration,
                                    "Generate a short advertisement for the following product: "
                                    "Rustic soy candle",
                                    "Rustic soy candle", 7) ==
          "Light up slow evenings with our rustic soy candle.");
    CHECK(expander.RewriteResponse("Hand poured soy wax.", 9) == "Poured by hand from soy wax.");
  }

  TEST_CASE("300 seeds match the closed-form count") {
    std::vector<InstructionPair> seeds;
    for (int i = 0; i < 300; ++i) {
      const TaskKind task = forge::kAllTasks[i % 5];
      seeds.push_back(Seed("seed-" + std::to_string(i), task,
                           forge::IsClassificationTask(task) ? "toys" : "out " + std::to_string(i)));
    }
    forge::MockBackend mock(TeacherMock());
    forge::ModelClient client(mock, {});
    forge::Expander expander(client, {});
    for (forge::VariantCounts v : {forge::VariantCounts{4, 4, 4}, forge::VariantCounts{2, 0, 3}}) {
      forge::ExpansionPlan plan;
      plan.variants = v;
      plan.rng_seed = 11;
      CHECK(expander.ExpandCorpus(seeds, plan).pairs.size() == CountOracle(seeds, plan));
    }
    forge::ExpansionPlan narrow;
    narrow.variants = {3, 1, 1};
    narrow.tasks_instruction_only = {TaskKind::kIntentSpeculation};
    CHECK(expander.ExpandCorpus(seeds, narrow).pairs.size() == CountOracle(seeds, narrow));
  }

  TEST_CASE("labels, provenance and order hold over a mixed corpus") {
    auto seeds = OnePerTask();
    seeds.push_back(Seed("s9", TaskKind::kIntentSpeculation, "toys"));
    forge::MockBackend mock(TeacherMock());
    forge::ModelClient client(mock, {});
    forge::Expander expander(client, {});
    forge::ExpansionPlan plan;
    plan.rng_seed = 5;
    auto result = expander.ExpandCorpus(seeds, plan);

    std::map<std::string, const InstructionPair*> by_id;
    for (const auto& s : seeds) by_id[s.id] = &s;
    std::size_t seed_cursor = 0;
    int last_strategy = -1;
    for (const auto& p : result.pairs) {
      CHECK(p.provenance.Valid());
      if (p.provenance.origin == forge::Origin::kSeed) {
        REQUIRE(seed_cursor < seeds.size());
        CHECK(p == seeds[seed_cursor++]);
        last_strategy = -1;
        continue;
      }
      // Variants follow their own seed, grouped by strategy.
      REQUIRE(p.provenance.seed_id.has_value());
      CHECK(*p.provenance.seed_id == seeds[seed_cursor - 1].id);
      const auto it = by_id.find(*p.provenance.seed_id);
      REQUIRE(it != by_id.end());
      CHECK(by_id.count(p.id) == 0);
      const int strategy = static_cast<int>(*p.provenance.strategy);
      CHECK(strategy >= last_strategy);
      last_strategy = strategy;
      if (forge::IsClassificationTask(p.task)) {
        CHECK(p.output == it->second->output);
        CHECK(p.provenance.strategy == Strategy::kInstructionRewrite);
      }
    }
    CHECK(seed_cursor == seeds.size());
  }

  TEST_CASE("mock expansion is deterministic and independent of concurrency") {
    const auto seeds = OnePerTask();
    forge::ExpansionPlan plan;
    plan.rng_seed = 99;
    forge::MockBackend mock(TeacherMock());
    forge::ModelClient client(mock, {});
    forge::TeacherConfig serial;
    serial.concurrency = 1;
    forge::TeacherConfig wide;
    wide.concurrency = 8;
    auto a = forge::Expander(client, serial).ExpandCorpus(seeds, plan).pairs;
    auto b = forge::Expander(client, wide).ExpandCorpus(seeds, plan).pairs;
    auto c = forge::Expander(client, wide).ExpandCorpus(seeds, plan).pairs;
    CHECK(a == b);
    CHECK(b == c);
    plan.rng_seed = 100;
    CHECK(forge::Expander(client, wide).ExpandCorpus(seeds, plan).pairs != a);
  }

  TEST_CASE("concurrent calls never exceed the bound") {
    std::vector<InstructionPair> seeds;
    for (int i = 0; i < 20; ++i) seeds.push_back(Seed("p" + std::to_string(i), TaskKind::kAdsGeneration, "x y"));
    for (std::size_t bound : {1u, 3u}) {
      ProbeBackend probe;
      forge::ModelClient client(probe, {});
      forge::TeacherConfig cfg;
      cfg.concurrency = bound;
      forge::Expander(client, cfg).ExpandCorpus(seeds, {});
      CHECK(probe.peak.load() >= 1);
      CHECK(probe.peak.load() <= static_cast<int>(bound));
    }
  }

  TEST_CASE("preconditions") {
    forge::MockBackend mock(TeacherMock());
    forge::ModelClient client(mock, {});
    forge::Expander expander(client, {});
    std::vector<InstructionPair> none;
    try {
      expander.ExpandCorpus(none, {});
      FAIL("expected EmptyInput");
    } catch (const forge::Error& e) {
      CHECK(e.code() == forge::ErrorCode::kEmptyInput);
    }
    forge::ExpansionPlan bad;
    bad.tasks_instruction_only = {TaskKind::kAdsGeneration};
    CHECK_THROWS_AS(bad.Validate(), forge::Error);
  }

  TEST_CASE("partial failure is reported, total failure throws") {
    const auto seeds = OnePerTask();
    forge::ExpansionPlan plan;
    plan.variants = {2, 2, 2};
    RejectRewrites reject;
    forge::ModelClient client(reject, {});
    auto result = forge::Expander(client, {}).ExpandCorpus(seeds, plan);
    CHECK(result.partial());
    CHECK(result.diagnostics.size() == 3 * 2);  // three generative seeds
    for (const auto& d : result.diagnostics) {
      CHECK(d.strategy == Strategy::kResponseRewrite);
      CHECK(d.error.find("rejected") != std::string::npos);
    }
    CHECK(result.pairs.size() == CountOracle(seeds, plan) - 6);

    AlwaysDown down;
    forge::ModelClient down_client(down, {});
    try {
      forge::Expander(down_client, {}).ExpandCorpus(seeds, plan);
      FAIL("expected AllCallsFailed");
    } catch (const forge::Error& e) {
      CHECK(e.code() == forge::ErrorCode::kAllCallsFailed);
    }
  }

  TEST_CASE("variant ids") {
    CHECK(forge::VariantId("seed-1", Strategy::kInstructionRewrite, 3) == "seed-1-ir03");
    CHECK(forge::VariantId("seed-1", Strategy::kResponseGeneration, 0) == "seed-1-rg00");
    CHECK(forge::VariantId("seed-1", Strategy::kResponseRewrite, 1) == "seed-1-rr01");
    CHECK(forge::VariantSeed(1, "a", Strategy::kResponseRewrite, 0) !=
          forge::VariantSeed(1, "a", Strategy::kResponseRewrite, 1));
  }
}
