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

// forge: build, expand, curate and score an e-commerce instruction corpus.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "forge/config.h"
#include "forge/error.h"
#include "forge/pipeline.h"

namespace {

struct CommonArgs {
  std::string config;
  std::string backend;
  std::vector<std::string> sets;
};

void AddCommon(CLI::App* cmd, CommonArgs& args, bool with_backend) {
  cmd->add_option("--config", args.config, "pipeline config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  if (with_backend) {
    cmd->add_option("--backend", args.backend, "model backend")
        ->check(CLI::IsMember({"mock", "http", "fixture"}));
  }
  cmd->add_option("--set", args.sets, "override a config key: a.b=value");
}

forge::PipelineConfig Load(const CommonArgs& args) {
  std::vector<std::string> overrides = args.sets;
  if (!args.backend.empty()) overrides.push_back("backend.kind=" + args.backend);
  return forge::LoadConfig(args.config, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: e-commerce instruction corpus toolkit"};
  app.require_subcommand(1);
  CommonArgs args;
  std::string verify_dir;

  auto* formulate = app.add_subcommand("formulate", "ingest records and build the seed set");
  auto* expand = app.add_subcommand("expand", "grow seeds with the teacher model");
  auto* curate = app.add_subcommand("curate", "dedup, balance and emit the dataset");
  auto* evaluate = app.add_subcommand("evaluate", "score generations or replay metric rows");
  auto* lora = app.add_subcommand("lora-verify", "check the adapter math");
  auto* human = app.add_subcommand("human-eval", "summarize A-D ratings");
  auto* verify = app.add_subcommand("verify", "recheck output hashes of a run");
  AddCommon(formulate, args, false);
  AddCommon(expand, args, true);
  AddCommon(curate, args, false);
  AddCommon(evaluate, args, true);
  AddCommon(lora, args, false);
  AddCommon(human, args, false);
  verify->add_option("out_dir", verify_dir, "run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (verify->parsed()) return forge::VerifyRun(verify_dir, std::cout);
    const forge::PipelineConfig config = Load(args);
    forge::StageResult result;
    if (formulate->parsed()) {
      result = forge::CmdFormulate(config, std::cout);
    } else if (expand->parsed()) {
      auto backend = forge::MakeBackend(config);
      result = forge::CmdExpand(config, *backend, std::cout);
    } else if (curate->parsed()) {
      result = forge::CmdCurate(config, std::cout);
    } else if (evaluate->parsed()) {
      auto backend = forge::MakeBackend(config);
      result = forge::CmdEvaluate(config, *backend, std::cout);
    } else if (lora->parsed()) {
      result = forge::CmdLoraVerify(config, std::cout);
    } else {
      result = forge::CmdHumanEval(config, std::cout);
    }
    return result.exit_code;
  } catch (const forge::Error& e) {
    std::cerr << "forge " << name << ": " << forge::ErrorCodeName(e.code())
              << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "forge " << name << ": " << e.what() << "\n";
  }
  return forge::kExitFailure;
}
