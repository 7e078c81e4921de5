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

#include "forge/text.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace forge {
namespace {

constexpr std::uint32_t kRemovedCategories =
    U_MASK(U_OTHER_SYMBOL) | U_MASK(U_MODIFIER_SYMBOL) | U_MASK(U_CONTROL_CHAR) |
    U_MASK(U_FORMAT_CHAR) | U_MASK(U_PRIVATE_USE_CHAR) | U_MASK(U_SURROGATE);

// Decodes one code point at *pos; ill-formed sequences yield U+FFFD.
UChar32 NextCodePoint(std::string_view text, std::int32_t* pos) {
  UChar32 c;
  U8_NEXT(reinterpret_cast<const std::uint8_t*>(text.data()), *pos,
          static_cast<std::int32_t>(text.size()), c);
  return c < 0 ? 0xFFFD : c;
}

void AppendCodePoint(std::string* out, UChar32 c) {
  std::uint8_t buf[U8_MAX_LENGTH];
  std::int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, c);
  out->append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

bool IsSeparator(UChar32 c) {
  return u_isUWhiteSpace(c) || (U_MASK(u_charType(c)) & kRemovedCategories);
}

std::vector<UChar32> Decode(std::string_view text) {
  std::vector<UChar32> out;
  out.reserve(text.size());
  std::int32_t pos = 0;
  while (pos < static_cast<std::int32_t>(text.size())) {
    out.push_back(NextCodePoint(text, &pos));
  }
  return out;
}

}  // namespace

std::string CleanText(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  std::int32_t pos = 0;
  while (pos < static_cast<std::int32_t>(raw.size())) {
    UChar32 c = NextCodePoint(raw, &pos);
    if (IsSeparator(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    AppendCodePoint(&out, c);
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::vector<UChar32> word;
  auto flush = [&] {
    std::size_t begin = 0;
    std::size_t end = word.size();
    while (begin < end && u_ispunct(word[begin])) {
      std::string t;
      AppendCodePoint(&t, word[begin++]);
      tokens.push_back(std::move(t));
    }
    std::size_t trailing_start = end;
    while (trailing_start > begin && u_ispunct(word[trailing_start - 1])) {
      --trailing_start;
    }
    if (begin < trailing_start) {
      std::string t;
      for (std::size_t i = begin; i < trailing_start; ++i) {
        AppendCodePoint(&t, word[i]);
      }
      tokens.push_back(std::move(t));
    }
    for (std::size_t i = trailing_start; i < end; ++i) {
      std::string t;
      AppendCodePoint(&t, word[i]);
      tokens.push_back(std::move(t));
    }
    word.clear();
  };
  for (UChar32 c : Decode(text)) {
    if (u_isUWhiteSpace(c)) {
      flush();
    } else {
      word.push_back(u_tolower(c));
    }
  }
  flush();
  return tokens;
}

std::optional<TaxonomyLabel> NormalizeLabel(std::string_view free_text) {
  // Lowercase, '&' -> " and ", punctuation and symbols become word breaks.
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (UChar32 c : Decode(free_text)) {
    if (c == '&') {
      flush();
      words.emplace_back("and");
    } else if (u_isUWhiteSpace(c) || u_ispunct(c) ||
               (U_MASK(u_charType(c)) & (U_GC_S_MASK | U_GC_C_MASK))) {
      flush();
    } else {
      AppendCodePoint(&current, u_tolower(c));
    }
  }
  flush();

  std::optional<TaxonomyLabel> best;
  std::size_t best_words = 0;
  std::size_t best_chars = 0;
  for (TaxonomyLabel label : TaxonomyLabel::All()) {
    std::vector<std::string_view> phrase;
    std::string_view name = label.name();
    for (std::size_t start = 0; start < name.size();) {
      std::size_t space = name.find(' ', start);
      if (space == std::string_view::npos) space = name.size();
      phrase.push_back(name.substr(start, space - start));
      start = space + 1;
    }
    if (phrase.size() > words.size()) continue;
    bool found = false;
    for (std::size_t i = 0; !found && i + phrase.size() <= words.size(); ++i) {
      found = true;
      for (std::size_t j = 0; j < phrase.size(); ++j) {
        if (words[i + j] != phrase[j]) {
          found = false;
          break;
        }
      }
    }
    if (!found) continue;
    if (phrase.size() > best_words ||
        (phrase.size() == best_words && name.size() > best_chars)) {
      best = label;
      best_words = phrase.size();
      best_chars = name.size();
    }
  }
  return best;
}

}  // namespace forge
