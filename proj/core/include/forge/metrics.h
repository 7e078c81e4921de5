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

#ifndef FORGE_METRICS_H_
#define FORGE_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/taxonomy.h"

namespace forge {

using Tokens = std::vector<std::string>;

inline constexpr double kDefaultBleuEpsilon = 1e-9;
inline constexpr double kDefaultRougeBeta = 1.2;

// Sentence BLEU-4 with uniform weights and brevity penalty, scaled to 0-100.
// Modified precision p_n = clipped matches / max(1, candidate n-grams); a
// zero match count is replaced by epsilon before the log.
double Bleu(std::span<const std::string> candidate,
            std::span<const std::string> reference,
            double epsilon = kDefaultBleuEpsilon);

// Length of the longest common subsequence.
std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b);

// ROUGE-L F-measure (1 + beta^2) P R / (R + beta^2 P), scaled to 0-100.
double RougeL(std::span<const std::string> candidate,
              std::span<const std::string> reference,
              double beta = kDefaultRougeBeta);

// exp(-mean(logprobs)); logprobs are natural logs and must be <= 0.
double Perplexity(std::span<const double> token_logprobs);

// 1 / ln(ppl); ppl must exceed 1. Strictly decreasing, so lower perplexity
// contributes a larger factor to the geometric mean.
double PplTransform(double ppl);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Macro precision / recall / F1 over the labels present in gold, each 0-100.
// A label never predicted has precision 0; F1 is per label, then averaged.
// nullopt predictions (unmapped answers) never match.
Prf MacroPrf(std::span<const std::optional<TaxonomyLabel>> predictions,
             std::span<const TaxonomyLabel> gold);

// Greedy cosine matching between token embeddings, no baseline rescaling:
// recall averages, over reference tokens, the best similarity to any
// candidate token; precision is the mirror image. 0-100.
Prf BertStyleScore(std::span<const std::vector<double>> candidate,
                   std::span<const std::vector<double>> reference);

inline constexpr std::size_t kMetricCount = 18;

// exp(mean(ln v)) over exactly 18 positive values (perplexity already
// transformed).
double GeometricMean(std::span<const double> values);

}  // namespace forge

#endif  // FORGE_METRICS_H_
