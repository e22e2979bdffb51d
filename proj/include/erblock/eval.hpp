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
// Blocking-quality measures (recall, precision, F-measure, reduction
// ratio, H3R) and the false-negative / neighborhood diagnostics.

#ifndef ERBLOCK_EVAL_HPP_
#define ERBLOCK_EVAL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "erblock/blocking.hpp"
#include "erblock/model.hpp"
#include "erblock/tokenize.hpp"

namespace erblock {

// Distinct unordered candidate pairs, packed as entity-index pairs; in
// clean-clean mode only cross-source pairs qualify.
class CandidatePairSet {
 public:
  static CandidatePairSet fromBlocks(const BlockingCollection& blocks);

  std::size_t size() const { return packed_.size(); }
  bool contains(EntityIndex a, EntityIndex b) const;
  const std::vector<std::uint64_t>& packed() const { return packed_; }

 private:
  std::vector<std::uint64_t> packed_;  // sorted (lo << 32 | hi)
};

// Distinct unordered candidate id pairs, canonical and sorted.
std::vector<IdPair> candidate_pairs(const BlockingCollection& blocks);

// (aggregate, distinct): aggregate counts every within-block co-occurrence
// (redundant comparisons included), distinct counts each pair once.
std::pair<std::uint64_t, std::uint64_t> comparison_counts(
    const BlockingCollection& blocks);

// clean-clean: |A|*|B|; dirty: n(n-1)/2.
std::uint64_t comparisons_without_blocking(const EntityCollection& collection);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
};

enum class RrBasis { aggregate, distinct };

std::string_view to_string(RrBasis basis);

inline constexpr const char* kH3rNotApplicable = "N/A (RR < 0)";

struct MetricsReport {
  ConfusionCounts counts;
  double recall = 0.0;
  double precision = 0.0;
  double fmeasure = 0.0;
  std::optional<double> rr;   // empty when comparisons without blocking = 0
  std::optional<double> h3r;  // empty unless rr > 0
  std::string h3rNote;        // kH3rNotApplicable when rr <= 0
  RrBasis rrBasis = RrBasis::aggregate;
  std::uint64_t comparisonsAggregate = 0;
  std::uint64_t comparisonsDistinct = 0;
  std::uint64_t comparisonsWithoutBlocking = 0;
  std::uint64_t totalPairs = 0;
  std::size_t blockCount = 0;
  std::size_t comparableBlockCount = 0;
  std::size_t unblockedCount = 0;
  std::optional<double> perEntityCommonTokenMedian;
  std::optional<std::size_t> clusterCount;
  std::optional<double> medianClusterSize;
};

double h3r_formula(double rr, double recall);

// Table-style scoring of a blocking collection against a ground truth that
// has been restricted to ids present in the collection.
MetricsReport score(const BlockingCollection& blocks, const GroundTruth& gt,
                    RrBasis basis = RrBasis::aggregate);

struct CommonTokenDistribution {
  std::map<std::uint64_t, std::uint64_t> histogram;  // count -> descriptions
  double median = 0.0;
};

// Per description, the number of its distinct tokens occurring in both
// sources; with a clustering, (cluster, token) keys take the place of
// tokens.  Clean-clean only.
CommonTokenDistribution common_token_distribution(
    const EntityCollection& collection, const TokenizerConfig& config,
    const AttributeClustering* clustering = nullptr);

struct FnAnalysis {
  std::uint64_t fnPairs = 0;
  std::uint64_t fnDescriptions = 0;
  std::uint64_t descriptionsWithNeighbors = 0;
  std::uint64_t descriptionsWithNeighborsInGt = 0;
  std::uint64_t descriptionsWithIdentifiedNeighbors = 0;
  std::uint64_t pairsWithMatchingNeighbors = 0;
  std::uint64_t pairsWithCommonIdentifiedMatch = 0;

  // Fractions; empty when there are no false negatives.
  std::optional<double> fracDescriptionsWithNeighbors;
  std::optional<double> fracDescriptionsWithNeighborsInGt;
  std::optional<double> fracDescriptionsWithIdentifiedNeighbors;
  std::optional<double> fracPairsWithMatchingNeighbors;
  std::optional<double> fracPairsWithCommonIdentifiedMatch;
};

// Characteristics of the missed matches.  A description's neighbors are
// the descriptions named by its resource-valued pairs; `identified` is the
// set of matches found so far.
FnAnalysis fn_analysis(const BlockingCollection& blocks, const GroundTruth& gt,
                       const std::vector<IdPair>& identified);

struct StructuralSample {
  std::uint64_t requestedSampleSize = 0;
  std::uint64_t sampledMatches = 0;
  std::uint64_t sampledNonMatches = 0;
  bool clipped = false;
  std::uint64_t matchesWithNeighbors = 0;
  std::uint64_t nonMatchesWithNeighbors = 0;
  double medianNeighborPairsMatches = 0.0;
  double medianNeighborPairsNonMatches = 0.0;
  std::uint64_t matchesWithMatchingNeighbors = 0;
  std::uint64_t nonMatchesWithMatchingNeighbors = 0;
};

// Seeded comparison of sampled match and non-match pairs on their
// neighborhoods.  When the sample size covers the whole population the
// result is seed-independent.
StructuralSample sample_structural_analysis(const GroundTruth& gt,
                                            const EntityCollection& collection,
                                            std::uint64_t sampleSize,
                                            std::uint64_t seed);

}  // namespace erblock

#endif  // ERBLOCK_EVAL_HPP_
