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

#ifndef FORGE_RECORD_H_
#define FORGE_RECORD_H_

#include <optional>
#include <string>
#include <string_view>

#include "forge/taxonomy.h"

namespace forge {

enum class Action : std::uint8_t { kNoAction, kClick, kCartAdd, kPurchase };

std::string_view ActionName(Action action);
// Accepts "no_action"/"no action", "click", "cart_add"/"cart add", "purchase".
std::optional<Action> ParseAction(std::string_view text);

// One interaction row from the platform log.
struct ProductRecord {
  std::string id;
  std::string title;
  std::optional<std::string> description;
  TaxonomyLabel taxonomy = TaxonomyLabel::FromIndex(0);
  std::optional<std::string> query;
  Action action = Action::kNoAction;

  friend bool operator==(const ProductRecord&, const ProductRecord&) = default;
};

}  // namespace forge

#endif  // FORGE_RECORD_H_
