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
// The four blocking pipelines: token blocking, attribute clustering
// blocking, prefix-infix(-suffix) blocking and iterative blocking.

#ifndef ERBLOCK_BLOCKING_HPP_
#define ERBLOCK_BLOCKING_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "erblock/engine.hpp"
#include "erblock/model.hpp"
#include "erblock/tokenize.hpp"
#include "erblock/uri.hpp"

namespace erblock {

// One block per distinct token over all values.  Clean-clean blocks whose
// members come from a single source are flagged non-comparable.
BlockingCollection token_blocking(std::shared_ptr<const EntityCollection> collection,
                                  const TokenizerConfig& config,
                                  const engine::EngineOptions& options = {});

// Per source, each attribute's values sorted lexicographically and joined
// by single spaces.
using AttributeProfiles = std::map<std::string, std::map<std::string, std::string>>;
AttributeProfiles attribute_profile(const EntityCollection& collection);

// Attribute assignment keyed by (source position, attribute name).
struct AttributeClustering {
  static constexpr std::uint32_t kGlueCluster = 0;

  std::map<std::pair<int, std::string>, std::uint32_t> assignment;
  std::uint32_t glueClusterId = kGlueCluster;
  std::uint32_t clusterCount = 0;  // highest non-glue cluster id

  std::optional<std::uint32_t> clusterOf(int source,
                                         const std::string& attribute) const;
  // Attribute count per non-glue cluster id.
  std::map<std::uint32_t, std::size_t> clusterSizes() const;
};

struct AttributeClusteringOptions {
  // Zero-similarity attributes share one glue cluster; when disabled each
  // gets a private singleton cluster instead.
  bool glueForZeroSimilarity = true;
};

// Cross-source best-match linking over trigram-Jaccard of attribute value
// profiles; reciprocal best matches are linked and connected components
// become clusters.  Attributes whose best similarity is zero land in the
// glue cluster; positively-similar attributes whose choice is not
// reciprocated keep a singleton cluster.
AttributeClustering attribute_clustering(const EntityCollection& collection,
                                         const engine::EngineOptions& options = {},
                                         const AttributeClusteringOptions& = {});

// Token blocking keyed by (cluster id, token).
BlockingCollection attribute_clustering_blocking(
    std::shared_ptr<const EntityCollection> collection,
    const TokenizerConfig& config, const engine::EngineOptions& options = {},
    const AttributeClustering* precomputed = nullptr);

// Token blocks over literal values plus one block per subject-URI infix.
BlockingCollection pis_blocking(std::shared_ptr<const EntityCollection> collection,
                                const TokenizerConfig& config,
                                const engine::EngineOptions& options = {});

struct MergedEntity {
  std::vector<std::string> memberIds;  // sorted original ids, >= 1
  std::vector<AttributeValue> pairs;   // union of members' pairs

  // Original id for singletons, else "m:" + ids joined by '+'.
  std::string displayId() const;
};

class MatchOracle {
 public:
  static MatchOracle groundTruth(const GroundTruth& gt);
  static MatchOracle valueSimilarity(double threshold);

  // Merged entities match when any cross pair of their members is in the
  // ground truth, or when the trigram-Jaccard over all their values reaches
  // the threshold.
  bool match(const EntityCollection& universe,
             const std::vector<EntityIndex>& a,
             const std::vector<EntityIndex>& b) const;

 private:
  enum class Kind { ground_truth, value_similarity };
  Kind kind_ = Kind::ground_truth;
  const GroundTruth* gt_ = nullptr;
  double threshold_ = 0.0;
};

enum class BlockOrder {
  sizeDescending,  // larger blocks first, ties by key bytes
  byKey,
};

struct IterativeStats {
  std::uint64_t comparisons = 0;
  std::uint64_t merges = 0;
  std::uint64_t passes = 0;
};

// Processes blocks in a deterministic order, merging matching entities and
// propagating merges to every other block, until a full pass adds nothing.
// Returns a partition of all universe ids (unblocked ids stay singletons).
std::vector<MergedEntity> iterative_blocking(
    const BlockingCollection& blocks, const MatchOracle& oracle,
    BlockOrder order = BlockOrder::sizeDescending,
    const std::vector<std::vector<std::string>>* initialGroups = nullptr,
    IterativeStats* stats = nullptr);

// Newline-delimited records {namespace, clusterId?, term, memberIds[]},
// sorted by (namespace, clusterId, term); bit-exact across runs.
void write_blocks_jsonl(std::ostream& out, const BlockingCollection& blocks);
BlockingCollection read_blocks_jsonl(std::istream& in,
                                     std::shared_ptr<const EntityCollection> universe);

// TSV: source, attribute, clusterId.
void write_clustering_tsv(std::ostream& out, const EntityCollection& collection,
                          const AttributeClustering& clustering);

}  // namespace erblock

#endif  // ERBLOCK_BLOCKING_HPP_
