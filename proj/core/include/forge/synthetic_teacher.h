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

#ifndef FORGE_SYNTHETIC_TEACHER_H_
#define FORGE_SYNTHETIC_TEACHER_H_

#include <string>

#include "forge/modelio.h"

namespace forge {

// Deterministic rule-based stand-in for a teacher model, used as the mock
// backend's fallback so the pipeline runs offline. It recognizes the three
// expansion prompts: rewrite prompts get synonym substitution inside a
// randomly chosen frame, generation prompts get a templated response built
// from the seed input. Output depends only on (request.text, request.seed).
std::string SyntheticTeacher(const BackendRequest& request);

}  // namespace forge

#endif  // FORGE_SYNTHETIC_TEACHER_H_
