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

#ifndef FORGE_TAXONOMY_H_
#define FORGE_TAXONOMY_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace forge {

inline constexpr std::size_t kTaxonomySize = 15;

// One of the fifteen canonical product categories. Construction only goes
// through Parse/FromIndex, so a held value is always valid.
class TaxonomyLabel {
 public:
  static std::optional<TaxonomyLabel> Parse(std::string_view canonical);
  static TaxonomyLabel FromIndex(std::size_t index);
  static std::span<const TaxonomyLabel> All();

  std::string_view name() const;
  std::size_t index() const { return index_; }

  friend bool operator==(TaxonomyLabel, TaxonomyLabel) = default;
  friend auto operator<=>(TaxonomyLabel, TaxonomyLabel) = default;

 private:
  explicit constexpr TaxonomyLabel(std::uint8_t index) : index_(index) {}
  std::uint8_t index_;
};

// The canonical category strings, in declaration order.
std::span<const std::string_view> TaxonomyNames();

// Comma-separated canonical names ("clothing, accessories, ...").
std::string TaxonomyListText();

enum class TaskKind : std::uint8_t {
  kAdsGeneration,
  kTitleRewriting,
  kProductClassification,
  kIntentSpeculation,
  kGeneralQa,
};

inline constexpr std::array<TaskKind, 5> kAllTasks = {
    TaskKind::kAdsGeneration, TaskKind::kTitleRewriting,
    TaskKind::kProductClassification, TaskKind::kIntentSpeculation,
    TaskKind::kGeneralQa};

std::string_view TaskName(TaskKind task);
std::optional<TaskKind> ParseTask(std::string_view name);

// Classification-style tasks have a closed response set.
bool IsClassificationTask(TaskKind task);
inline bool IsGenerativeTask(TaskKind task) {
  return !IsClassificationTask(task);
}

// Object features interleaved by the tasks: seller (S), explicit and implicit
// customer features (C0, C1), platform taxonomy and knowledge (P0, P1).
enum class ObjectFeature : std::uint8_t { kS, kC0, kC1, kP0, kP1 };

std::string_view FeatureName(ObjectFeature feature);

// Fixed task -> feature mapping.
std::span<const ObjectFeature> FeaturesFor(TaskKind task);

}  // namespace forge

#endif  // FORGE_TAXONOMY_H_
