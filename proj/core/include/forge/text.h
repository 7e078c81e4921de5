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

#ifndef FORGE_TEXT_H_
#define FORGE_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/taxonomy.h"

namespace forge {

// Removes code points in the general categories So, Sk, Cc, Cf, Co and Cs
// (emoji, modifier symbols, controls, format characters, private use,
// surrogates). Each removed code point acts as a word break; whitespace runs
// are collapsed to one ASCII space and the ends are trimmed. Invalid UTF-8
// decodes to U+FFFD, which is So and therefore removed as well.
std::string CleanText(std::string_view raw);

// Lowercases, splits on whitespace, then peels leading and trailing
// punctuation (categories P*) off each word as single-code-point tokens.
// Punctuation inside a word ("boho-style") stays attached.
std::vector<std::string> Tokenize(std::string_view text);

// Maps a free-text model answer onto the taxonomy: lowercase, "&" -> "and",
// punctuation stripped, then the longest category phrase found as a
// contiguous word run wins. nullopt means unmapped; unmapped never matches a
// gold label.
std::optional<TaxonomyLabel> NormalizeLabel(std::string_view free_text);

}  // namespace forge

#endif  // FORGE_TEXT_H_
