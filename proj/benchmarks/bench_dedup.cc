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

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "forge/curate.h"

namespace {

// Pairs built from a small vocabulary so near-duplicates are common.
std::vector<forge::InstructionPair> Corpus(std::size_t n) {
  static const char* vocab[] = {"write", "an", "ad", "for", "this", "salt", "lamp", "mug",
                                "short", "title", "gift", "warm", "light", "home", "kit"};
  std::mt19937_64 gen(9);
  std::vector<forge::InstructionPair> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = "p" + std::to_string(i);
    out[i].task = forge::kAllTasks[i % 5];
    for (int w = 0; w < 18; ++w) {
      out[i].instruction += std::string(w ? " " : "") + vocab[gen() % (i % 3 ? 15 : 6)];
    }
    out[i].output = "ok";
  }
  return out;
}

void BM_Dedup(benchmark::State& state) {
  const auto pairs = Corpus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(forge::Dedup(pairs, 0.9));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dedup)->Arg(1000)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
