// Copyright 2026 The erblock Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "erblock/errors.hpp"
#include "erblock/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Blocking algorithms for entity resolution over RDF data"};
  app.require_subcommand(1);

  std::string configPath;
  std::vector<std::pair<std::string, std::string>> overrides;
  bool strictFlag = false;

  std::vector<std::string> commands = {"ingest", "block", "eval", "analyze",
                                       "all"};
  std::vector<CLI::App*> subs;
  for (const auto& name : commands) {
    auto* cmd = app.add_subcommand(name);
    cmd->add_option("config", configPath, "Run configuration file")->required();
    auto addOverride = [&overrides, cmd](const std::string& flag,
                                         const std::string& key,
                                         const std::string& help) {
      cmd->add_option_function<std::string>(
          flag,
          [&overrides, key](const std::string& v) {
            overrides.emplace_back(key, v);
          },
          help);
    };
    addOverride("--mode", "mode", "clean-clean or dirty");
    addOverride("--algorithm", "algorithm", "token | attr-cluster | pis | iterative");
    addOverride("--gt", "gt", "Ground-truth file (.nt, .nt.gz or .tsv)");
    addOverride("--gt-predicate", "gt_predicate", "Link predicate URI");
    addOverride("--workers", "workers", "Worker count (0 = auto)");
    addOverride("--seed", "seed", "Sampling seed");
    addOverride("--out", "out", "Output directory");
    addOverride("--rr-basis", "rr_basis", "aggregate or distinct");
    addOverride("--blocks", "blocks", "Existing block file to evaluate");
    addOverride("--sample-size", "sample_size", "Structural-analysis sample size");
    cmd->add_flag("--strict", strictFlag, "Abort on malformed input lines");
    subs.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string command;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) command = commands[i];
  }

  erblock::RunConfig config;
  try {
    config = erblock::load_run_config(configPath);
    for (const auto& [key, value] : overrides) {
      erblock::apply_override(config, key, value);
    }
    if (strictFlag) erblock::apply_override(config, "strict", "true");
  } catch (const erblock::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  return erblock::dispatch_command(command, config, std::cout, std::cerr);
}
