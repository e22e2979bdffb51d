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
//
// Config-driven benchmark runs: ingest -> block -> eval -> analyze.

#ifndef ERBLOCK_RUN_HPP_
#define ERBLOCK_RUN_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "erblock/blocking.hpp"
#include "erblock/eval.hpp"
#include "erblock/ingest.hpp"
#include "erblock/model.hpp"

namespace erblock {

struct RunConfig {
  std::vector<std::pair<std::string, std::string>> inputs;  // (tag, path)
  CollectionMode mode = CollectionMode::dirty;
  std::string algorithm = "token";  // token | attr-cluster | pis | iterative
  std::string gtPath;
  std::string gtPredicate = "http://www.w3.org/2002/07/owl#sameAs";
  bool gtRestrict = true;
  bool filterToGt = false;
  TokenizerConfig tokenizer;
  unsigned workers = 0;
  std::uint64_t memoryCeilingMb = 4096;
  std::string outDir = "out";
  std::uint64_t seed = 1;
  RrBasis rrBasis = RrBasis::aggregate;
  bool strict = false;
  std::string oracle = "ground-truth";  // ground-truth | similarity
  double oracleThreshold = 0.75;
  std::uint64_t sampleSize = 1000;
  std::string blocksPath;  // optional block file for eval/analyze

  engine::EngineOptions engineOptions() const;
  void validate() const;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

// One `key value` override per entry, same keys as the config file.
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);

struct RunContext {
  explicit RunContext(RunConfig config);

  const RunConfig config;

  // Lazily built stages, shared by the commands.
  std::shared_ptr<const EntityCollection> collection();
  const GroundTruth& groundTruth();
  const BlockingCollection& blockingCollection();
  const std::optional<AttributeClustering>& clustering();

  struct IngestStats {
    std::uint64_t triples = 0;
    std::uint64_t malformed = 0;
    std::uint64_t descriptions = 0;
    double avgPairsPerDescription = 0.0;
    std::uint64_t attributes = 0;
    std::uint64_t entityTypes = 0;
  };
  const IngestStats& ingestStats();

  std::vector<std::string> warnings;

 private:
  void ingest();

  std::shared_ptr<const EntityCollection> collection_;
  std::optional<GroundTruth> gt_;
  std::optional<BlockingCollection> blocks_;
  std::optional<AttributeClustering> clustering_;
  bool clusteringDone_ = false;
  IngestStats ingestStats_;
  bool ingested_ = false;
};

int cmd_ingest(RunContext& context, std::ostream& log);
int cmd_block(RunContext& context, std::ostream& log);
int cmd_eval(RunContext& context, std::ostream& log);
int cmd_analyze(RunContext& context, std::ostream& log);
int cmd_all(RunContext& context, std::ostream& log);

// Runs a subcommand, mapping errors to exit codes: 0 success, 1 config
// error, 2 data error, 3 resource ceiling exceeded.
int dispatch_command(const std::string& command, const RunConfig& config,
                     std::ostream& log, std::ostream& err);

}  // namespace erblock

#endif  // ERBLOCK_RUN_HPP_
