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

#ifndef FORGE_PROMPTS_H_
#define FORGE_PROMPTS_H_

#include <string>
#include <string_view>

namespace forge {

inline constexpr std::string_view kInstructionRewriteHeader =
    "Rewrite the following instruction while maintaining semantic "
    "consistency:";
inline constexpr std::string_view kResponseRewriteHeader =
    "Rewrite the following generated response to diversify its expression:";

// "[INST] <header> [/INST] <seed instruction>"
std::string InstructionRewritePrompt(std::string_view seed_instruction);
// "[INST] <expanded instruction> [/INST]\n<seed inputs>"
std::string ResponseGenerationPrompt(std::string_view instruction,
                                     std::string_view seed_input);
// "[INST] <header> [/INST] <response>"
std::string ResponseRewritePrompt(std::string_view response);

}  // namespace forge

#endif  // FORGE_PROMPTS_H_
