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

#ifndef FORGE_HUMAN_EVAL_H_
#define FORGE_HUMAN_EVAL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/taxonomy.h"

namespace forge {

// A: attractive and covers the product; D: unreadable.
enum class Rate : std::uint8_t { kA, kB, kC, kD };

inline constexpr std::size_t kRateCount = 4;

char RateLetter(Rate rate);
std::optional<Rate> ParseRate(std::string_view text);

struct HumanRating {
  std::string annotator;
  std::string sample_id;
  TaskKind task = TaskKind::kAdsGeneration;  // ads or title rewriting only
  Rate rate = Rate::kA;
};

struct RateDistribution {
  std::size_t total = 0;
  std::array<std::size_t, kRateCount> counts{};
  std::array<double, kRateCount> fractions{};
};

struct HumanEvalReport {
  std::map<TaskKind, RateDistribution> per_task;
  std::map<std::string, std::size_t> per_annotator;

  nlohmann::json ToJson() const;
};

HumanEvalReport HumanEvalSummary(std::span<const HumanRating> ratings);

HumanRating RatingFromJson(const nlohmann::json& j);
std::vector<HumanRating> ParseRatings(std::string_view jsonl);
std::vector<HumanRating> LoadRatings(const std::filesystem::path& path);

}  // namespace forge

#endif  // FORGE_HUMAN_EVAL_H_
