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

#include "forge/taxonomy.h"

#include <cassert>

#include "forge/record.h"

namespace forge {
namespace {

constexpr std::array<std::string_view, kTaxonomySize> kNames = {
    "clothing",
    "accessories",
    "home and living",
    "weddings",
    "art and collectibles",
    "craft supplies and tools",
    "jewelry",
    "paper and party supplies",
    "toys and games",
    "electronics and accessories",
    "books movies and music",
    "bath and beauty",
    "bags and purses",
    "shoes",
    "pet supplies",
};

constexpr std::array<ObjectFeature, 1> kAdsFeatures = {ObjectFeature::kS};
constexpr std::array<ObjectFeature, 2> kTitleFeatures = {ObjectFeature::kS,
                                                         ObjectFeature::kC0};
constexpr std::array<ObjectFeature, 2> kClassifyFeatures = {
    ObjectFeature::kS, ObjectFeature::kP0};
constexpr std::array<ObjectFeature, 2> kIntentFeatures = {ObjectFeature::kC1,
                                                          ObjectFeature::kP0};
constexpr std::array<ObjectFeature, 1> kQaFeatures = {ObjectFeature::kP1};

}  // namespace

std::optional<TaxonomyLabel> TaxonomyLabel::Parse(std::string_view canonical) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == canonical) return FromIndex(i);
  }
  return std::nullopt;
}

TaxonomyLabel TaxonomyLabel::FromIndex(std::size_t index) {
  assert(index < kTaxonomySize);
  return TaxonomyLabel(static_cast<std::uint8_t>(index));
}

std::span<const TaxonomyLabel> TaxonomyLabel::All() {
  static const auto kAll = [] {
    std::array<TaxonomyLabel, kTaxonomySize> all{
        TaxonomyLabel(0),  TaxonomyLabel(1),  TaxonomyLabel(2),
        TaxonomyLabel(3),  TaxonomyLabel(4),  TaxonomyLabel(5),
        TaxonomyLabel(6),  TaxonomyLabel(7),  TaxonomyLabel(8),
        TaxonomyLabel(9),  TaxonomyLabel(10), TaxonomyLabel(11),
        TaxonomyLabel(12), TaxonomyLabel(13), TaxonomyLabel(14)};
    return all;
  }();
  return kAll;
}

std::string_view TaxonomyLabel::name() const { return kNames[index_]; }

std::span<const std::string_view> TaxonomyNames() { return kNames; }

std::string TaxonomyListText() {
  std::string out;
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (i > 0) out += ", ";
    out += kNames[i];
  }
  return out;
}

std::string_view TaskName(TaskKind task) {
  switch (task) {
    case TaskKind::kAdsGeneration: return "ads_generation";
    case TaskKind::kTitleRewriting: return "title_rewriting";
    case TaskKind::kProductClassification: return "product_classification";
    case TaskKind::kIntentSpeculation: return "intent_speculation";
    case TaskKind::kGeneralQa: return "general_qa";
  }
  return "unknown";
}

std::optional<TaskKind> ParseTask(std::string_view name) {
  for (TaskKind task : kAllTasks) {
    if (TaskName(task) == name) return task;
  }
  return std::nullopt;
}

bool IsClassificationTask(TaskKind task) {
  return task == TaskKind::kProductClassification ||
         task == TaskKind::kIntentSpeculation;
}

std::string_view FeatureName(ObjectFeature feature) {
  switch (feature) {
    case ObjectFeature::kS: return "S";
    case ObjectFeature::kC0: return "C0";
    case ObjectFeature::kC1: return "C1";
    case ObjectFeature::kP0: return "P0";
    case ObjectFeature::kP1: return "P1";
  }
  return "?";
}

std::span<const ObjectFeature> FeaturesFor(TaskKind task) {
  switch (task) {
    case TaskKind::kAdsGeneration: return kAdsFeatures;
    case TaskKind::kTitleRewriting: return kTitleFeatures;
    case TaskKind::kProductClassification: return kClassifyFeatures;
    case TaskKind::kIntentSpeculation: return kIntentFeatures;
    case TaskKind::kGeneralQa: return kQaFeatures;
  }
  return {};
}

std::string_view ActionName(Action action) {
  switch (action) {
    case Action::kNoAction: return "no_action";
    case Action::kClick: return "click";
    case Action::kCartAdd: return "cart_add";
    case Action::kPurchase: return "purchase";
  }
  return "unknown";
}

std::optional<Action> ParseAction(std::string_view text) {
  if (text == "no_action" || text == "no action") return Action::kNoAction;
  if (text == "click") return Action::kClick;
  if (text == "cart_add" || text == "cart add") return Action::kCartAdd;
  if (text == "purchase") return Action::kPurchase;
  return std::nullopt;
}

}  // namespace forge
