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

#include "oracles.h"

#include <unicode/uniset.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace oracle {
namespace {

void Guard(bool ok, const char* what) {
  if (!ok) throw InputTooLarge(what);
}

void GuardMatrix(const Matrix& m) {
  Guard(m.size() <= kMaxDim, "matrix has too many rows");
  for (const auto& row : m) Guard(row.size() <= kMaxDim, "matrix has too many columns");
}

std::vector<Words> Ngrams(const Words& w, std::size_t n) {
  std::vector<Words> out;
  for (std::size_t i = 0; i + n <= w.size(); ++i) {
    out.emplace_back(w.begin() + static_cast<long>(i),
                     w.begin() + static_cast<long>(i + n));
  }
  return out;
}

std::size_t CountOf(const std::vector<Words>& grams, const Words& g) {
  return static_cast<std::size_t>(std::count(grams.begin(), grams.end(), g));
}

bool IsSubsequence(const Words& small, const Words& big) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < big.size() && j < small.size(); ++i) {
    if (big[i] == small[j]) ++j;
  }
  return j == small.size();
}

std::size_t LcsMemo(const Words& a, const Words& b, std::size_t i, std::size_t j,
                    std::map<std::pair<std::size_t, std::size_t>, std::size_t>& memo) {
  if (i == a.size() || j == b.size()) return 0;
  auto key = std::make_pair(i, j);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::size_t best = a[i] == b[j] ? 1 + LcsMemo(a, b, i + 1, j + 1, memo)
                                  : std::max(LcsMemo(a, b, i + 1, j, memo),
                                             LcsMemo(a, b, i, j + 1, memo));
  memo[key] = best;
  return best;
}

double Cosine(const Vector& u, const Vector& v) {
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0 || nv == 0) return 0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace

std::string CategoryFilter(const std::string& utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeSet removed(
      icu::UnicodeString::fromUTF8("[[:So:][:Sk:][:Cc:][:Cf:][:Co:][:Cs:]]"), status);
  const icu::UnicodeSet space(icu::UnicodeString::fromUTF8("[:White_Space:]"), status);
  if (U_FAILURE(status)) throw std::runtime_error("bad UnicodeSet pattern");

  const icu::UnicodeString text = icu::UnicodeString::fromUTF8(utf8);
  // Every dropped code point becomes a blank, then blanks are squeezed.
  icu::UnicodeString spaced;
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (removed.contains(c) || space.contains(c)) {
      spaced.append(static_cast<UChar32>(' '));
    } else {
      spaced.append(c);
    }
  }
  std::string bytes;
  spaced.toUTF8String(bytes);
  std::string out;
  for (char ch : bytes) {
    if (ch == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += ch;
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

Words AsciiSplit(const std::string& ascii) {
  Words out;
  std::string word;
  auto emit = [&] {
    if (word.empty()) return;
    std::size_t lead = 0;
    while (lead < word.size() && std::ispunct(static_cast<unsigned char>(word[lead]))) {
      ++lead;
    }
    std::size_t tail = word.size();
    while (tail > lead && std::ispunct(static_cast<unsigned char>(word[tail - 1]))) {
      --tail;
    }
    for (std::size_t i = 0; i < lead; ++i) out.emplace_back(1, word[i]);
    if (tail > lead) out.push_back(word.substr(lead, tail - lead));
    for (std::size_t i = tail; i < word.size(); ++i) out.emplace_back(1, word[i]);
    word.clear();
  };
  for (char ch : ascii) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      emit();
    } else {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
  }
  emit();
  return out;
}

std::optional<std::size_t> LabelScan(const std::string& ascii,
                                     const std::vector<std::string>& labels) {
  std::string flat;
  for (char ch : ascii) {
    if (ch == '&') {
      flat += " and ";
    } else if (std::isalnum(static_cast<unsigned char>(ch))) {
      flat += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else {
      flat += ' ';
    }
  }
  const Words words = AsciiSplit(flat);
  std::optional<std::size_t> best;
  std::pair<std::size_t, std::size_t> best_size{0, 0};
  for (std::size_t l = 0; l < labels.size(); ++l) {
    const Words phrase = AsciiSplit(labels[l]);
    bool hit = false;
    for (std::size_t start = 0; start + phrase.size() <= words.size(); ++start) {
      if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<long>(start))) {
        hit = true;
      }
    }
    const std::pair<std::size_t, std::size_t> size{phrase.size(), labels[l].size()};
    if (hit && size > best_size) {
      best = l;
      best_size = size;
    }
  }
  return best;
}

double Bleu(const Words& candidate, const Words& reference, double epsilon) {
  Guard(candidate.size() <= kMaxTokens && reference.size() <= kMaxTokens,
        "bleu oracle input too long");
  double product = 1.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto cand = Ngrams(candidate, n);
    const auto ref = Ngrams(reference, n);
    double clipped = 0;
    std::vector<Words> done;
    for (const auto& g : cand) {
      if (std::find(done.begin(), done.end(), g) != done.end()) continue;
      done.push_back(g);
      clipped += static_cast<double>(std::min(CountOf(cand, g), CountOf(ref, g)));
    }
    const double total = std::max<double>(1.0, static_cast<double>(cand.size()));
    const double p = (clipped > 0 ? clipped : epsilon) / total;
    product *= std::pow(p, 0.25);
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * bp * product;
}

std::size_t Lcs(const Words& a, const Words& b) {
  Guard(a.size() <= kMaxTokens && b.size() <= kMaxTokens, "lcs oracle input too long");
  if (a.size() <= 16) {
    // Try every subsequence of a, longest first.
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
      const std::size_t len = static_cast<std::size_t>(std::popcount(mask));
      if (len <= best) continue;
      Words sub;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (mask & (1u << i)) sub.push_back(a[i]);
      }
      if (IsSubsequence(sub, b)) best = len;
    }
    return best;
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  return LcsMemo(a, b, 0, 0, memo);
}

double RougeL(const Words& candidate, const Words& reference, double beta) {
  const double l = static_cast<double>(Lcs(candidate, reference));
  if (l == 0) return 0.0;
  const double p = l / static_cast<double>(candidate.size());
  const double r = l / static_cast<double>(reference.size());
  return 100.0 * (1 + beta * beta) * p * r / (r + beta * beta * p);
}

double Perplexity(const Vector& logprobs) {
  Guard(logprobs.size() <= kMaxTokens, "perplexity oracle input too long");
  // Geometric mean of inverse probabilities.
  double log_inv = 0;
  for (double lp : logprobs) log_inv += std::log(1.0 / std::exp(lp));
  return std::exp(log_inv / static_cast<double>(logprobs.size()));
}

Prf ConfusionPrf(const std::vector<int>& predicted, const std::vector<int>& gold,
                 int n_labels) {
  Guard(gold.size() <= kMaxTokens, "confusion oracle input too long");
  // matrix[g][p]; column n_labels collects unmapped predictions.
  std::vector<std::vector<int>> matrix(n_labels, std::vector<int>(n_labels + 1, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const int p = predicted[i] < 0 ? n_labels : predicted[i];
    ++matrix[gold[i]][p];
  }
  Prf out;
  int present = 0;
  for (int l = 0; l < n_labels; ++l) {
    int row = 0, col = 0;
    for (int k = 0; k <= n_labels; ++k) row += matrix[l][k];
    for (int g = 0; g < n_labels; ++g) col += matrix[g][l];
    if (row == 0) continue;
    ++present;
    const double tp = matrix[l][l];
    const double p = col == 0 ? 0.0 : tp / col;
    const double r = tp / row;
    out.p += p;
    out.r += r;
    out.f1 += (p + r) == 0 ? 0.0 : 2 * p * r / (p + r);
  }
  out.p = 100.0 * out.p / present;
  out.r = 100.0 * out.r / present;
  out.f1 = 100.0 * out.f1 / present;
  return out;
}

Prf BertScore(const Matrix& candidate, const Matrix& reference) {
  GuardMatrix(candidate);
  GuardMatrix(reference);
  Matrix sim(candidate.size(), Vector(reference.size()));
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    for (std::size_t j = 0; j < reference.size(); ++j) {
      sim[i][j] = Cosine(candidate[i], reference[j]);
    }
  }
  Prf out;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    out.p += *std::max_element(sim[i].begin(), sim[i].end());
  }
  for (std::size_t j = 0; j < reference.size(); ++j) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidate.size(); ++i) m = std::max(m, sim[i][j]);
    out.r += m;
  }
  out.p /= static_cast<double>(candidate.size());
  out.r /= static_cast<double>(reference.size());
  out.f1 = (out.p + out.r) == 0 ? 0 : 2 * out.p * out.r / (out.p + out.r);
  out.p *= 100;
  out.r *= 100;
  out.f1 *= 100;
  return out;
}

std::set<std::string> Shingles(const Words& tokens) {
  std::set<std::string> out;
  if (tokens.size() < 3) {
    std::string whole;
    for (std::size_t i = 0; i < tokens.size(); ++i) whole += (i ? " " : "") + tokens[i];
    out.insert(whole);
    return out;
  }
  for (std::size_t i = 0; i + 3 <= tokens.size(); ++i) {
    out.insert(tokens[i] + " " + tokens[i + 1] + " " + tokens[i + 2]);
  }
  return out;
}

double Jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t both = 0;
  for (const auto& s : a) both += b.count(s);
  return static_cast<double>(both) / static_cast<double>(a.size() + b.size() - both);
}

std::vector<std::size_t> DedupSurvivors(const std::vector<Words>& texts,
                                        double threshold) {
  Guard(texts.size() <= 2000, "dedup oracle handles at most 2000 texts");
  std::vector<std::size_t> kept;
  std::vector<std::set<std::string>> kept_shingles;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    bool drop = false;
    for (std::size_t k : kept) drop = drop || texts[k] == texts[i];
    if (!drop && threshold < 1.0) {
      const auto s = Shingles(texts[i]);
      for (const auto& other : kept_shingles) {
        if (Jaccard(s, other) >= threshold) {
          drop = true;
          break;
        }
      }
    }
    if (!drop) {
      kept.push_back(i);
      kept_shingles.push_back(Shingles(texts[i]));
    }
  }
  return kept;
}

Vector DenseLora(const Matrix& w0, const Matrix& b, const Matrix& a, const Vector& x) {
  GuardMatrix(w0);
  GuardMatrix(b);
  GuardMatrix(a);
  const std::size_t d = w0.size();
  const std::size_t k = x.size();
  const std::size_t r = a.size();
  Matrix w = w0;  // materialize W0 + BA
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t t = 0; t < r; ++t) w[i][j] += b[i][t] * a[t][j];
    }
  }
  Vector h(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < k; ++j) h[i] += w[i][j] * x[j];
  }
  return h;
}

Vector FdGradient(const std::function<double(const Vector&)>& loss,
                  const Vector& at, double eps) {
  Guard(at.size() <= kMaxDim * kMaxDim, "gradient oracle input too large");
  Vector grad(at.size());
  Vector probe = at;
  for (std::size_t i = 0; i < at.size(); ++i) {
    probe[i] = at[i] + eps;
    const double up = loss(probe);
    probe[i] = at[i] - eps;
    const double down = loss(probe);
    probe[i] = at[i];
    grad[i] = (up - down) / (2 * eps);
  }
  return grad;
}

std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 gen(seed);
  for (std::size_t i = n; i-- > 1;) {
    const unsigned __int128 span = static_cast<unsigned __int128>(i) + 1;
    const auto skip = static_cast<std::uint64_t>(
        ((static_cast<unsigned __int128>(1) << 64)) % span);
    std::uint64_t raw;
    do {
      raw = gen();
    } while (raw < skip);
    std::swap(perm[i], perm[static_cast<std::size_t>(raw % static_cast<std::uint64_t>(span))]);
  }
  return perm;
}

}  // namespace oracle
