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

#ifndef FORGE_PIPELINE_H_
#define FORGE_PIPELINE_H_

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "forge/config.h"
#include "forge/modelio.h"

namespace forge {

// Process exit contract shared by every command.
enum ExitCode : int { kExitClean = 0, kExitFailure = 1, kExitPartial = 2 };

struct StageResult {
  int exit_code = kExitClean;
  std::vector<std::filesystem::path> outputs;
};

// One command instance per out_dir. Creation fails with kLocked when
// another holder exists.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& out_dir);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
};

std::unique_ptr<Backend> MakeBackend(const PipelineConfig& config);
RetryPolicy MakeRetryPolicy(const PipelineConfig& config);

StageResult CmdFormulate(const PipelineConfig& config, std::ostream& log);
StageResult CmdExpand(const PipelineConfig& config, Backend& backend,
                      std::ostream& log);
StageResult CmdCurate(const PipelineConfig& config, std::ostream& log);
StageResult CmdEvaluate(const PipelineConfig& config, Backend& backend,
                        std::ostream& log);
StageResult CmdLoraVerify(const PipelineConfig& config, std::ostream& log);
StageResult CmdHumanEval(const PipelineConfig& config, std::ostream& log);

// Rechecks every output hash recorded in out_dir/run_manifest.json.
int VerifyRun(const std::filesystem::path& out_dir, std::ostream& log);

inline constexpr const char* kRunManifestName = "run_manifest.json";

}  // namespace forge

#endif  // FORGE_PIPELINE_H_
