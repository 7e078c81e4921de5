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

#include "forge/metrics.h"

namespace {

forge::Tokens Sentence(std::mt19937_64& gen, std::size_t n) {
  static const char* vocab[] = {"salt", "lamp", "pink", "gift", "home", "warm", "light",
                                "the",  "for",  "a",    "mug",  "kit",  "soy",  "candle"};
  forge::Tokens t(n);
  for (auto& w : t) w = vocab[gen() % 14];
  return t;
}

void BM_Bleu(benchmark::State& state) {
  std::mt19937_64 gen(1);
  const auto c = Sentence(gen, state.range(0));
  const auto r = Sentence(gen, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(forge::Bleu(c, r));
}
BENCHMARK(BM_Bleu)->Arg(16)->Arg(64)->Arg(256);

void BM_RougeL(benchmark::State& state) {
  std::mt19937_64 gen(2);
  const auto c = Sentence(gen, state.range(0));
  const auto r = Sentence(gen, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(forge::RougeL(c, r));
}
BENCHMARK(BM_RougeL)->Arg(16)->Arg(64)->Arg(256);

void BM_BertStyleScore(benchmark::State& state) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> a(state.range(0), std::vector<double>(768));
  auto b = a;
  for (auto* m : {&a, &b}) {
    for (auto& row : *m) {
      for (double& x : row) x = g(gen);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(forge::BertStyleScore(a, b));
}
BENCHMARK(BM_BertStyleScore)->Arg(16)->Arg(64);

}  // namespace
