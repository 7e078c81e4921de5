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

#include "forge/curate.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "forge/error.h"
#include "forge/hash.h"
#include "forge/rng.h"
#include "forge/text.h"

namespace forge {

using nlohmann::json;

void CurationConfig::Validate() const {
  if (!(near_dup_threshold >= 0.0 && near_dup_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "near_dup_threshold must be in [0, 1]");
  }
  for (TaskKind task : kAllTasks) {
    if (per_task_override.count(task) == 0 && target_total % 5 != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target_total must be divisible by 5 unless every task has "
                  "an explicit target");
    }
  }
}

std::size_t CurationConfig::TargetFor(TaskKind task) const {
  if (auto it = per_task_override.find(task); it != per_task_override.end()) {
    return it->second;
  }
  return target_total / kAllTasks.size();
}

std::string NormalizedPairText(const InstructionPair& pair) {
  std::string out;
  auto append = [&](const std::string& field) {
    for (const auto& token : Tokenize(CleanText(field))) {
      if (!out.empty() && out.back() != ' ') out += ' ';
      out += token;
    }
  };
  append(pair.instruction);
  out += " \x1f ";
  append(pair.input);
  out += " \x1f ";
  append(pair.output);
  return out;
}

std::vector<std::uint64_t> PairShingles(const InstructionPair& pair) {
  const std::string text = NormalizedPairText(pair);
  std::vector<std::string_view> tokens;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t end = text.find(' ', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) tokens.push_back(std::string_view(text).substr(start, end - start));
    start = end + 1;
  }
  std::vector<std::uint64_t> shingles;
  if (tokens.size() < 3) {
    shingles.push_back(Fnv1a64(text));
  } else {
    for (std::size_t i = 0; i + 3 <= tokens.size(); ++i) {
      std::string gram;
      gram.append(tokens[i]).append(" ").append(tokens[i + 1]).append(" ")
          .append(tokens[i + 2]);
      shingles.push_back(Fnv1a64(gram));
    }
  }
  std::sort(shingles.begin(), shingles.end());
  shingles.erase(std::unique(shingles.begin(), shingles.end()), shingles.end());
  return shingles;
}

double JaccardSorted(std::span<const std::uint64_t> a,
                     std::span<const std::uint64_t> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t i = 0, j = 0, inter = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter, ++i, ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<InstructionPair> Dedup(std::span<const InstructionPair> pairs,
                                   double threshold) {
  // Exact pass.
  std::vector<std::size_t> unique;
  {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (seen.insert(NormalizedPairText(pairs[i])).second) unique.push_back(i);
    }
  }
  if (threshold >= 1.0) {
    std::vector<InstructionPair> out;
    for (std::size_t i : unique) out.push_back(pairs[i]);
    return out;
  }

  std::vector<std::vector<std::uint64_t>> sets(unique.size());
  std::unordered_map<std::uint64_t, std::size_t> doc_freq;
  for (std::size_t u = 0; u < unique.size(); ++u) {
    sets[u] = PairShingles(pairs[unique[u]]);
    for (std::uint64_t s : sets[u]) ++doc_freq[s];
  }
  // Rare shingles first, so prefixes are selective.
  auto rarer = [&](std::uint64_t a, std::uint64_t b) {
    const std::size_t fa = doc_freq[a], fb = doc_freq[b];
    return fa != fb ? fa < fb : a < b;
  };

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> last_seen(unique.size(), SIZE_MAX);
  for (std::size_t u = 0; u < unique.size(); ++u) {
    std::vector<std::uint64_t> ordered = sets[u];
    std::sort(ordered.begin(), ordered.end(), rarer);
    const double size = static_cast<double>(ordered.size());
    // Any set with Jaccard >= t shares a token within this prefix. The small
    // slack only lengthens the prefix.
    std::size_t prefix =
        ordered.size() -
        static_cast<std::size_t>(std::max(0.0, std::ceil(threshold * size - 1e-9))) +
        1;
    prefix = std::clamp<std::size_t>(prefix, 1, ordered.size());

    bool duplicate = false;
    for (std::size_t p = 0; p < prefix && !duplicate; ++p) {
      auto it = index.find(ordered[p]);
      if (it == index.end()) continue;
      for (std::size_t k : it->second) {
        if (last_seen[k] == u) continue;
        last_seen[k] = u;
        const double other = static_cast<double>(sets[k].size());
        if (std::min(size, other) < threshold * std::max(size, other) - 1e-9) {
          continue;
        }
        if (JaccardSorted(sets[u], sets[k]) >= threshold) {
          duplicate = true;
          break;
        }
      }
    }
    if (duplicate) continue;
    kept.push_back(u);
    for (std::size_t p = 0; p < prefix; ++p) index[ordered[p]].push_back(u);
  }

  std::vector<InstructionPair> out;
  out.reserve(kept.size());
  for (std::size_t u : kept) out.push_back(pairs[unique[u]]);
  return out;
}

std::vector<InstructionPair> Balance(std::span<const InstructionPair> pairs,
                                     const CurationConfig& config) {
  config.Validate();
  std::vector<InstructionPair> out;
  for (TaskKind task : kAllTasks) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].task == task) members.push_back(i);
    }
    const std::size_t need = config.TargetFor(task);
    if (members.size() < need) {
      throw Error(ErrorCode::kInsufficientPairs,
                  std::string(TaskName(task)) + ": have " +
                      std::to_string(members.size()) + ", need " +
                      std::to_string(need));
    }
    Rng rng(DeriveSeed(config.rng_seed, TaskName(task)));
    for (std::size_t pick : rng.SampleSorted(members.size(), need)) {
      out.push_back(pairs[members[pick]]);
    }
  }
  return out;
}

json Manifest::ToJson() const {
  return json{{"count", count}, {"per_task", per_task}, {"sha256", sha256}};
}

std::string SerializeJsonl(std::span<const InstructionPair> pairs) {
  std::string out;
  for (const auto& pair : pairs) {
    out += forge::ToJson(pair).dump(-1, ' ', false,
                                    json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

Manifest EmitJsonl(std::span<const InstructionPair> pairs,
                   const std::filesystem::path& path) {
  const std::string bytes = SerializeJsonl(pairs);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
  }
  Manifest manifest;
  manifest.count = pairs.size();
  for (TaskKind task : kAllTasks) manifest.per_task[std::string(TaskName(task))] = 0;
  for (const auto& pair : pairs) ++manifest.per_task[std::string(TaskName(pair.task))];
  manifest.sha256 = Sha256Hex(bytes);
  return manifest;
}

std::vector<InstructionPair> LoadPairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  }
  std::vector<InstructionPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded()) {
      throw Error(ErrorCode::kMalformedInput,
                  path.string() + ":" + std::to_string(line_no) +
                      ": invalid json");
    }
    out.push_back(PairFromJson(row));
  }
  return out;
}

// --- Held-out packs -------------------------------------------------------

std::string_view HeldoutKindName(HeldoutKind kind) {
  return kind == HeldoutKind::kScenarioAds ? "scenario_ads" : "recommendation";
}

json HeldoutPrompt::ToJson() const {
  return json{{"id", id},
              {"kind", HeldoutKindName(kind)},
              {"scenario", scenario ? json(*scenario) : json(nullptr)},
              {"prompt", prompt}};
}

std::string JoinProducts(std::span<const std::string> products) {
  std::string out;
  for (std::size_t i = 0; i < products.size(); ++i) {
    if (i > 0) {
      if (products.size() == 2) {
        out += " and ";
      } else {
        out += i + 1 == products.size() ? ", and " : ", ";
      }
    }
    out += products[i];
  }
  return out;
}

namespace {

std::string ScenarioPrompt(const Scenario& scenario,
                           std::span<const std::string> products) {
  const std::string list = JoinProducts(products);
  switch (scenario.style) {
    case ScenarioStyle::kFestival:
      return scenario.name +
             " is almost. Generate an ad for the following products: " + list +
             ".";
    case ScenarioStyle::kAudience: {
      std::string audience = scenario.name;
      for (char& c : audience) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return "Generate an ad for " + audience +
             " based on the following products: " + list + ".";
    }
    case ScenarioStyle::kSalesEvent: {
      std::string event = scenario.name;
      for (char& c : event) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return "Generate a " + event +
             " advertisement for the following products: " + list + ".";
    }
  }
  return {};
}

std::string HeldoutId(HeldoutKind kind, std::size_t n) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "heldout-%s-%04zu",
                std::string(HeldoutKindName(kind)).c_str(), n);
  return buf;
}

}  // namespace

std::vector<HeldoutPrompt> BuildHeldoutPacks(HeldoutKind kind,
                                             const HeldoutInputs& inputs) {
  std::vector<HeldoutPrompt> out;
  if (kind == HeldoutKind::kScenarioAds) {
    if (inputs.scenarios.empty() || inputs.product_sets.empty()) {
      throw Error(ErrorCode::kEmptyInput,
                  "scenario_ads pack needs scenarios and product sets");
    }
    for (const auto& set : inputs.product_sets) {
      if (set.empty()) {
        throw Error(ErrorCode::kEmptyInput, "scenario_ads: empty product list");
      }
    }
    for (const auto& scenario : inputs.scenarios) {
      for (const auto& set : inputs.product_sets) {
        HeldoutPrompt p;
        p.id = HeldoutId(kind, out.size());
        p.kind = kind;
        p.scenario = scenario.name;
        p.prompt = ScenarioPrompt(scenario, set);
        out.push_back(std::move(p));
      }
    }
  } else {
    std::vector<std::string> intents;
    for (const auto& intent : inputs.intents) {
      std::string cleaned = CleanText(intent);
      if (!cleaned.empty()) intents.push_back(std::move(cleaned));
    }
    if (intents.empty()) {
      throw Error(ErrorCode::kEmptyInput, "recommendation pack needs intents");
    }
    for (auto& intent : intents) {
      HeldoutPrompt p;
      p.id = HeldoutId(kind, out.size());
      p.kind = kind;
      p.prompt = std::move(intent);
      out.push_back(std::move(p));
    }
  }
  return out;
}

HeldoutInputs HeldoutInputsFromJson(const json& j) {
  HeldoutInputs inputs;
  try {
    for (const auto& s : j.value("scenarios", json::array())) {
      Scenario scenario;
      scenario.name = s.at("name").get<std::string>();
      const std::string style = s.value("style", "festival");
      if (style == "festival") {
        scenario.style = ScenarioStyle::kFestival;
      } else if (style == "audience") {
        scenario.style = ScenarioStyle::kAudience;
      } else if (style == "sales_event") {
        scenario.style = ScenarioStyle::kSalesEvent;
      } else {
        throw Error(ErrorCode::kMalformedInput, "unknown scenario style " + style);
      }
      inputs.scenarios.push_back(std::move(scenario));
    }
    inputs.product_sets = j.value("product_sets",
                                  std::vector<std::vector<std::string>>{});
    inputs.intents = j.value("intents", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("held-out inputs: ") + e.what());
  }
  return inputs;
}

void EmitHeldoutPack(std::span<const HeldoutPrompt> prompts,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& p : prompts) out << p.ToJson().dump() << '\n';
}

}  // namespace forge
