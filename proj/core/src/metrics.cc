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

#include "forge/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string_view>

#include "forge/error.h"

namespace forge {
namespace {

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts CountNgrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + i,
                                       tokens.begin() + i + n);
    ++counts[std::move(gram)];
  }
  return counts;
}

void RequireNonEmpty(std::span<const std::string> candidate,
                     std::span<const std::string> reference) {
  if (candidate.empty()) {
    throw Error(ErrorCode::kEmptyCandidate, "candidate has no tokens");
  }
  if (reference.empty()) {
    throw Error(ErrorCode::kEmptyReference, "reference has no tokens");
  }
}

double Harmonic(double p, double r) {
  return p + r != 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

double Bleu(std::span<const std::string> candidate,
            std::span<const std::string> reference, double epsilon) {
  RequireNonEmpty(candidate, reference);
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const NgramCounts cand = CountNgrams(candidate, n);
    const NgramCounts ref = CountNgrams(reference, n);
    std::size_t clipped = 0;
    std::size_t total = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      if (auto it = ref.find(gram); it != ref.end()) {
        clipped += std::min(count, it->second);
      }
    }
    const double denom = static_cast<double>(std::max<std::size_t>(1, total));
    const double numer = clipped == 0 ? epsilon : static_cast<double>(clipped);
    log_sum += 0.25 * std::log(numer / denom);
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * bp * std::exp(log_sum);
}

std::size_t LcsLength(std::span<const std::string> a,
                      std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double RougeL(std::span<const std::string> candidate,
              std::span<const std::string> reference, double beta) {
  RequireNonEmpty(candidate, reference);
  const double lcs = static_cast<double>(LcsLength(candidate, reference));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(candidate.size());
  const double r = lcs / static_cast<double>(reference.size());
  const double b2 = beta * beta;
  return 100.0 * (1.0 + b2) * p * r / (r + b2 * p);
}

double Perplexity(std::span<const double> token_logprobs) {
  if (token_logprobs.empty()) {
    throw Error(ErrorCode::kEmptySequence, "no token logprobs");
  }
  double sum = 0.0;
  for (double lp : token_logprobs) {
    if (lp > 0.0) {
      throw Error(ErrorCode::kPositiveLogprob,
                  "logprob " + std::to_string(lp) + " is positive");
    }
    sum += lp;
  }
  return std::exp(-sum / static_cast<double>(token_logprobs.size()));
}

double PplTransform(double ppl) {
  if (!(ppl > 1.0)) {
    throw Error(ErrorCode::kPplAtOrBelowOne,
                "perplexity " + std::to_string(ppl) + " is not above 1");
  }
  return 1.0 / std::log(ppl);
}

Prf MacroPrf(std::span<const std::optional<TaxonomyLabel>> predictions,
             std::span<const TaxonomyLabel> gold) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(predictions.size()) + " predictions vs " +
                    std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) throw Error(ErrorCode::kEmptyInput, "no samples");

  std::array<std::size_t, kTaxonomySize> tp{}, predicted{}, actual{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++actual[gold[i].index()];
    if (predictions[i]) {
      ++predicted[predictions[i]->index()];
      if (*predictions[i] == gold[i]) ++tp[gold[i].index()];
    }
  }
  Prf macro;
  std::size_t labels = 0;
  for (std::size_t l = 0; l < kTaxonomySize; ++l) {
    if (actual[l] == 0) continue;
    ++labels;
    const double p = predicted[l] == 0
                         ? 0.0
                         : static_cast<double>(tp[l]) / static_cast<double>(predicted[l]);
    const double r = static_cast<double>(tp[l]) / static_cast<double>(actual[l]);
    macro.precision += p;
    macro.recall += r;
    macro.f1 += Harmonic(p, r);
  }
  const double scale = 100.0 / static_cast<double>(labels);
  macro.precision *= scale;
  macro.recall *= scale;
  macro.f1 *= scale;
  return macro;
}

Prf BertStyleScore(std::span<const std::vector<double>> candidate,
                   std::span<const std::vector<double>> reference) {
  if (candidate.empty() || reference.empty()) {
    throw Error(ErrorCode::kEmptyInput, "embedding score needs tokens on both sides");
  }
  const std::size_t dim = candidate.front().size();
  auto check = [&](const std::vector<double>& v) {
    if (v.size() != dim || dim == 0) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "token vectors must share one nonzero width");
    }
  };
  for (const auto& v : candidate) check(v);
  for (const auto& v : reference) check(v);

  auto normalized = [](std::span<const std::vector<double>> side) {
    std::vector<std::vector<double>> out;
    out.reserve(side.size());
    for (const auto& v : side) {
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      std::vector<double> u(v.size(), 0.0);
      if (norm > 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / norm;
      }
      out.push_back(std::move(u));
    }
    return out;
  };
  const auto cand = normalized(candidate);
  const auto ref = normalized(reference);

  std::vector<double> best_for_cand(cand.size(), -1.0);
  std::vector<double> best_for_ref(ref.size(), -1.0);
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      double sim = 0.0;
      for (std::size_t d = 0; d < dim; ++d) sim += cand[i][d] * ref[j][d];
      best_for_cand[i] = std::max(best_for_cand[i], sim);
      best_for_ref[j] = std::max(best_for_ref[j], sim);
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  Prf out;
  out.precision = mean(best_for_cand);
  out.recall = mean(best_for_ref);
  out.f1 = Harmonic(out.precision, out.recall);
  out.precision *= 100.0;
  out.recall *= 100.0;
  out.f1 *= 100.0;
  return out;
}

double GeometricMean(std::span<const double> values) {
  if (values.size() != kMetricCount) {
    throw Error(ErrorCode::kWrongArity,
                "geometric mean needs " + std::to_string(kMetricCount) +
                    " values, got " + std::to_string(values.size()));
  }
  double log_sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) {
      throw Error(ErrorCode::kNonPositiveValue,
                  "value at index " + std::to_string(i) + " is not positive");
    }
    log_sum += std::log(values[i]);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

}  // namespace forge
