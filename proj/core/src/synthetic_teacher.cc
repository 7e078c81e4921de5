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

#include "forge/synthetic_teacher.h"

#include <array>
#include <cctype>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forge/prompts.h"
#include "forge/rng.h"

namespace forge {

std::string InstructionRewritePrompt(std::string_view seed_instruction) {
  return "[INST] " + std::string(kInstructionRewriteHeader) + " [/INST] " +
         std::string(seed_instruction);
}

std::string ResponseGenerationPrompt(std::string_view instruction,
                                     std::string_view seed_input) {
  return "[INST] " + std::string(instruction) + " [/INST]\n" +
         std::string(seed_input);
}

std::string ResponseRewritePrompt(std::string_view response) {
  return "[INST] " + std::string(kResponseRewriteHeader) + " [/INST] " +
         std::string(response);
}

namespace {

using SynonymTable =
    std::unordered_map<std::string_view, std::vector<std::string_view>>;

const SynonymTable& Synonyms() {
  static const SynonymTable kTable = {
      {"generate", {"produce", "create", "write", "compose", "craft", "prepare"}},
      {"short", {"brief", "concise", "compact", "quick", "succinct"}},
      {"advertisement", {"ad", "promotion", "advert", "marketing blurb", "promo"}},
      {"following", {"given", "below", "specified", "listed", "provided"}},
      {"product", {"item", "listing", "article", "offering"}},
      {"rewrite", {"rephrase", "revise", "reword", "rework", "restate"}},
      {"title", {"name", "headline", "listing title", "heading"}},
      {"query", {"search", "search query", "search term", "request"}},
      {"category", {"class", "group", "section", "department", "type"}},
      {"belongs", {"fits", "falls", "pertains"}},
      {"customer", {"shopper", "buyer", "user", "client"}},
      {"interested", {"keen", "curious", "drawn"}},
      {"what", {"which"}},
      {"which", {"what"}},
      {"given", {"provided", "supplied"}},
      {"great", {"excellent", "wonderful", "fantastic", "superb"}},
      {"perfect", {"ideal", "flawless", "just right"}},
      {"beautiful", {"lovely", "gorgeous", "stunning", "elegant"}},
      {"unique", {"distinctive", "one-of-a-kind", "special", "original"}},
      {"handmade", {"handcrafted", "hand-made", "artisan-made"}},
      {"gift", {"present", "keepsake", "surprise"}},
      {"quality", {"craftsmanship", "grade", "caliber"}},
      {"cozy", {"snug", "comfy", "warm"}},
      {"stylish", {"fashionable", "chic", "trendy"}},
      {"comfortable", {"comfy", "easy-wearing", "relaxed"}},
      {"made", {"crafted", "built", "created"}},
      {"can", {"may", "are able to"}},
      {"help", {"assist", "support"}},
      {"use", {"utilize", "apply", "employ"}},
      {"buy", {"purchase", "get", "pick up"}},
      {"shop", {"store", "storefront", "boutique"}},
      {"order", {"purchase", "sale"}},
      {"orders", {"purchases", "sales"}},
      {"fee", {"charge", "cost"}},
      {"fees", {"charges", "costs"}},
      {"charged", {"billed", "invoiced"}},
      {"receive", {"get", "obtain"}},
      {"choose", {"select", "pick"}},
      {"need", {"require", "must have"}},
      {"show", {"display", "present"}},
      {"also", {"additionally", "as well"}},
      {"sell", {"offer", "list"}},
      {"new", {"fresh", "brand-new"}},
      {"set", {"collection", "kit", "bundle"}},
      {"small", {"little", "mini", "petite"}},
      {"large", {"big", "oversized", "roomy"}},
      {"vintage", {"retro", "classic", "old-school"}},
      {"custom", {"personalized", "made-to-order", "bespoke"}},
      {"personalized", {"custom", "customized", "bespoke"}},
  };
  return kTable;
}

constexpr std::array<std::string_view, 8> kInstructionFrames = {
    "{}",
    "Please {lc}",
    "{} Keep it concise.",
    "Task: {}",
    "Could you {lc}",
    "{} Answer directly.",
    "Here is a request: {lc}",
    "Instruction: {}",
};

constexpr std::array<std::string_view, 8> kResponseFrames = {
    "{}",
    "In short, {lc}",
    "{} Highly recommended.",
    "Good news: {lc}",
    "{} Don't miss out!",
    "Simply put, {lc}",
    "{} Treat yourself today.",
    "Here it is: {}",
};

constexpr std::array<std::string_view, 12> kOpenings = {
    "Discover",        "Meet",           "Introducing",
    "Say hello to",    "Fall in love with", "Upgrade your day with",
    "Treat yourself to", "Bring home",   "Check out",
    "Get ready for",   "Celebrate with", "Make room for",
};

constexpr std::array<std::string_view, 12> kClosings = {
    "Order now!",
    "Buy now and enjoy fast shipping.",
    "Add it to your cart today.",
    "Limited stock, so grab yours soon.",
    "A thoughtful pick for any occasion.",
    "Crafted with care and ready to ship.",
    "Perfect for gifting or keeping.",
    "Shop today and see the difference.",
    "Loved by shoppers everywhere.",
    "Your new favorite is waiting.",
    "Quality you can feel.",
    "Make it yours today.",
};

std::string LowerFirst(std::string s) {
  if (!s.empty() && std::isupper(static_cast<unsigned char>(s[0])) &&
      !(s.size() > 1 && std::isupper(static_cast<unsigned char>(s[1])))) {
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  }
  return s;
}

std::string ApplyFrame(std::string_view frame, const std::string& body) {
  std::string out(frame);
  if (auto pos = out.find("{lc}"); pos != std::string::npos) {
    return out.replace(pos, 4, LowerFirst(body));
  }
  if (auto pos = out.find("{}"); pos != std::string::npos) {
    return out.replace(pos, 2, body);
  }
  return out;
}

// Replaces known words with a random synonym, keeping leading capitals and
// trailing punctuation.
std::string SubstituteWords(std::string_view text, Rng& rng) {
  const auto& table = Synonyms();
  std::string out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    std::string word(text.substr(start, end - start));
    std::size_t core_end = word.size();
    while (core_end > 0 &&
           std::ispunct(static_cast<unsigned char>(word[core_end - 1]))) {
      --core_end;
    }
    std::string core = word.substr(0, core_end);
    std::string lower = core;
    for (char& c : lower) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (auto it = table.find(lower); it != table.end() && !core.empty()) {
      const auto& alts = it->second;
      std::string pick(alts[rng.UniformBelow(alts.size())]);
      if (std::isupper(static_cast<unsigned char>(core[0]))) {
        pick[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(pick[0])));
      }
      word = pick + word.substr(core_end);
    }
    if (!out.empty()) out += ' ';
    out += word;
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

bool StartsWith(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

std::string Flatten(std::string_view text) {
  std::string out;
  for (char c : text) out.push_back(c == '\n' ? ' ' : c);
  return out;
}

}  // namespace

std::string SyntheticTeacher(const BackendRequest& request) {
  Rng rng(DeriveSeed(request.seed.value_or(0), request.text));
  const std::string instr_prefix =
      "[INST] " + std::string(kInstructionRewriteHeader) + " [/INST] ";
  const std::string resp_prefix =
      "[INST] " + std::string(kResponseRewriteHeader) + " [/INST] ";
  std::string_view text = request.text;

  if (StartsWith(text, instr_prefix)) {
    std::string body = SubstituteWords(text.substr(instr_prefix.size()), rng);
    return ApplyFrame(kInstructionFrames[rng.UniformBelow(kInstructionFrames.size())],
                      body);
  }
  if (StartsWith(text, resp_prefix)) {
    std::string body = SubstituteWords(text.substr(resp_prefix.size()), rng);
    return ApplyFrame(kResponseFrames[rng.UniformBelow(kResponseFrames.size())],
                      body);
  }

  // Response generation: "[INST] <instruction> [/INST]\n<inputs>".
  std::string_view instruction = text;
  std::string_view input;
  if (auto close = text.find("[/INST]"); close != std::string_view::npos) {
    instruction = text.substr(0, close);
    if (StartsWith(instruction, "[INST] ")) instruction.remove_prefix(7);
    input = text.substr(close + 7);
    while (!input.empty() && (input.front() == '\n' || input.front() == ' ')) {
      input.remove_prefix(1);
    }
  }
  const std::string opening(kOpenings[rng.UniformBelow(kOpenings.size())]);
  const std::string closing(kClosings[rng.UniformBelow(kClosings.size())]);
  if (input.empty()) {
    // Open question without product context.
    return "Thanks for asking. " +
           SubstituteWords(Flatten(instruction), rng) +
           " You can find the details in your account settings and the Help "
           "Center. " + closing;
  }
  return opening + " " + SubstituteWords(Flatten(input), rng) + ". " + closing;
}

}  // namespace forge
