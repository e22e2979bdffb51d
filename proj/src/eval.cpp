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

#include "erblock/eval.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "erblock/errors.hpp"

namespace erblock {

namespace {

inline std::uint64_t packPair(EntityIndex a, EntityIndex b) {
  if (b < a) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

bool pairEligible(const EntityCollection& universe, EntityIndex a,
                  EntityIndex b) {
  if (universe.mode() != CollectionMode::clean_clean) return true;
  return universe.sourceIndexOf(a) != universe.sourceIndexOf(b);
}

double medianOf(std::vector<std::uint64_t> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return static_cast<double>(values[mid]);
  return (static_cast<double>(values[mid - 1]) +
          static_cast<double>(values[mid])) /
         2.0;
}

}  // namespace

std::string_view to_string(RrBasis basis) {
  return basis == RrBasis::aggregate ? "aggregate" : "distinct";
}

CandidatePairSet CandidatePairSet::fromBlocks(const BlockingCollection& blocks) {
  const EntityCollection& universe = blocks.universe();
  CandidatePairSet set;
  for (const auto& block : blocks.blocks()) {
    if (!block.comparable) continue;
    const auto& m = block.members;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        if (pairEligible(universe, m[i], m[j])) {
          set.packed_.push_back(packPair(m[i], m[j]));
        }
      }
    }
  }
  std::sort(set.packed_.begin(), set.packed_.end());
  set.packed_.erase(std::unique(set.packed_.begin(), set.packed_.end()),
                    set.packed_.end());
  return set;
}

bool CandidatePairSet::contains(EntityIndex a, EntityIndex b) const {
  return std::binary_search(packed_.begin(), packed_.end(), packPair(a, b));
}

std::vector<IdPair> candidate_pairs(const BlockingCollection& blocks) {
  const auto set = CandidatePairSet::fromBlocks(blocks);
  const EntityCollection& universe = blocks.universe();
  std::vector<IdPair> pairs;
  pairs.reserve(set.size());
  for (std::uint64_t packed : set.packed()) {
    pairs.push_back(make_id_pair(
        universe.at(static_cast<EntityIndex>(packed >> 32)).id,
        universe.at(static_cast<EntityIndex>(packed & 0xffffffffu)).id));
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::pair<std::uint64_t, std::uint64_t> comparison_counts(
    const BlockingCollection& blocks) {
  const EntityCollection& universe = blocks.universe();
  std::uint64_t aggregate = 0;
  for (const auto& block : blocks.blocks()) {
    if (!block.comparable) continue;
    if (universe.mode() == CollectionMode::clean_clean) {
      std::uint64_t left = 0;
      for (EntityIndex m : block.members) {
        if (universe.sourceIndexOf(m) == 0) ++left;
      }
      aggregate += left * (block.members.size() - left);
    } else {
      const std::uint64_t k = block.members.size();
      aggregate += k * (k - 1) / 2;
    }
  }
  return {aggregate, CandidatePairSet::fromBlocks(blocks).size()};
}

std::uint64_t comparisons_without_blocking(const EntityCollection& collection) {
  if (collection.mode() == CollectionMode::clean_clean) {
    return static_cast<std::uint64_t>(collection.sourceSize(0)) *
           collection.sourceSize(1);
  }
  const std::uint64_t n = collection.size();
  return n * (n - 1) / 2;
}

double h3r_formula(double rr, double recall) {
  return 2.0 * rr * recall / (rr + recall);
}

MetricsReport score(const BlockingCollection& blocks, const GroundTruth& gt,
                    RrBasis basis) {
  const EntityCollection& universe = blocks.universe();
  const auto candidates = CandidatePairSet::fromBlocks(blocks);

  MetricsReport report;
  report.rrBasis = basis;

  // Ground-truth pairs restricted to the collection define TP + FN; in
  // clean-clean mode only cross-source pairs are resolvable at all.
  std::uint64_t gtInCollection = 0;
  for (const auto& [a, b] : gt.pairs()) {
    const auto ia = universe.indexOf(a);
    const auto ib = universe.indexOf(b);
    if (!ia || !ib || !pairEligible(universe, *ia, *ib)) continue;
    ++gtInCollection;
    if (candidates.contains(*ia, *ib)) ++report.counts.tp;
  }
  report.counts.fn = gtInCollection - report.counts.tp;
  report.counts.fp = candidates.size() - report.counts.tp;
  report.totalPairs = comparisons_without_blocking(universe);
  report.counts.tn =
      report.totalPairs - report.counts.tp - report.counts.fp - report.counts.fn;

  const auto [aggregate, distinct] = comparison_counts(blocks);
  report.comparisonsAggregate = aggregate;
  report.comparisonsDistinct = distinct;
  report.comparisonsWithoutBlocking = report.totalPairs;
  report.blockCount = blocks.blockCount();
  report.comparableBlockCount = blocks.comparableBlockCount();
  report.unblockedCount = blocks.unblocked().size();

  const std::uint64_t tpfn = report.counts.tp + report.counts.fn;
  const std::uint64_t tpfp = report.counts.tp + report.counts.fp;
  report.recall =
      tpfn == 0 ? 0.0 : static_cast<double>(report.counts.tp) / tpfn;
  report.precision =
      tpfp == 0 ? 0.0 : static_cast<double>(report.counts.tp) / tpfp;
  report.fmeasure = report.precision + report.recall == 0.0
                        ? 0.0
                        : 2.0 * report.precision * report.recall /
                              (report.precision + report.recall);

  if (report.comparisonsWithoutBlocking == 0) {
    report.rr.reset();
    report.h3rNote = "N/A (no comparisons without blocking)";
  } else {
    const std::uint64_t with =
        basis == RrBasis::aggregate ? aggregate : distinct;
    report.rr = 1.0 - static_cast<double>(with) /
                          static_cast<double>(report.comparisonsWithoutBlocking);
    if (*report.rr > 0.0) {
      report.h3r = h3r_formula(*report.rr, report.recall);
    } else {
      report.h3rNote = kH3rNotApplicable;
    }
  }
  return report;
}

CommonTokenDistribution common_token_distribution(
    const EntityCollection& collection, const TokenizerConfig& config,
    const AttributeClustering* clustering) {
  if (collection.mode() != CollectionMode::clean_clean) {
    throw ConfigError("common-token distribution requires a clean-clean collection");
  }
  // Keys per description: tokens, or cluster-qualified tokens.
  std::vector<std::set<std::string>> keysOf(collection.size());
  std::unordered_map<std::string, unsigned> sourcesOfKey;
  for (EntityIndex i = 0; i < collection.size(); ++i) {
    const auto& d = collection.at(i);
    const int source = collection.sourceIndexOf(i);
    for (const auto& pair : d.pairs) {
      std::string prefix;
      if (clustering) {
        const auto cluster = clustering->clusterOf(source, pair.attribute);
        if (!cluster) continue;
        prefix = std::to_string(*cluster) + ":";
      }
      for (const auto& token : tokenize(pair.value, config)) {
        keysOf[i].insert(prefix + token);
      }
    }
    for (const auto& key : keysOf[i]) {
      sourcesOfKey[key] |= source == 0 ? 1u : 2u;
    }
  }

  CommonTokenDistribution dist;
  std::vector<std::uint64_t> counts;
  counts.reserve(collection.size());
  for (EntityIndex i = 0; i < collection.size(); ++i) {
    std::uint64_t common = 0;
    for (const auto& key : keysOf[i]) {
      if (sourcesOfKey.at(key) == 3u) ++common;
    }
    counts.push_back(common);
    ++dist.histogram[common];
  }
  dist.median = medianOf(std::move(counts));
  return dist;
}

namespace {

// Neighbor indices per description: descriptions named by resource values.
std::vector<std::vector<EntityIndex>> neighborIndex(
    const EntityCollection& collection) {
  std::vector<std::vector<EntityIndex>> neighbors(collection.size());
  for (EntityIndex i = 0; i < collection.size(); ++i) {
    std::set<EntityIndex> found;
    for (const auto& pair : collection.at(i).pairs) {
      if (pair.value.kind != ValueKind::resource) continue;
      const auto idx = collection.indexOf(pair.value.text);
      if (idx && *idx != i) found.insert(*idx);
    }
    neighbors[i].assign(found.begin(), found.end());
  }
  return neighbors;
}

}  // namespace

FnAnalysis fn_analysis(const BlockingCollection& blocks, const GroundTruth& gt,
                       const std::vector<IdPair>& identified) {
  const EntityCollection& universe = blocks.universe();
  const auto candidates = CandidatePairSet::fromBlocks(blocks);
  const auto neighbors = neighborIndex(universe);

  std::set<IdPair> identifiedSet(identified.begin(), identified.end());
  std::unordered_set<std::string> identifiedIds;
  for (const auto& [a, b] : identifiedSet) {
    identifiedIds.insert(a);
    identifiedIds.insert(b);
  }
  // Partners per id within the identified set, for the third-description case.
  std::unordered_map<std::string, std::vector<std::string>> identifiedPartners;
  for (const auto& [a, b] : identifiedSet) {
    identifiedPartners[a].push_back(b);
    identifiedPartners[b].push_back(a);
  }

  std::vector<std::pair<EntityIndex, EntityIndex>> fnPairs;
  for (const auto& [a, b] : gt.pairs()) {
    const auto ia = universe.indexOf(a);
    const auto ib = universe.indexOf(b);
    if (!ia || !ib || !pairEligible(universe, *ia, *ib)) continue;
    if (!candidates.contains(*ia, *ib)) fnPairs.emplace_back(*ia, *ib);
  }

  FnAnalysis out;
  out.fnPairs = fnPairs.size();
  if (fnPairs.empty()) return out;

  std::set<EntityIndex> fnDescriptions;
  for (const auto& [a, b] : fnPairs) {
    fnDescriptions.insert(a);
    fnDescriptions.insert(b);
  }
  out.fnDescriptions = fnDescriptions.size();

  for (EntityIndex d : fnDescriptions) {
    const auto& ns = neighbors[d];
    if (ns.empty()) continue;
    ++out.descriptionsWithNeighbors;
    bool inGt = false, identifiedNeighbor = false;
    for (EntityIndex n : ns) {
      const auto& id = universe.at(n).id;
      if (gt.mentions(id)) inGt = true;
      if (identifiedIds.count(id)) identifiedNeighbor = true;
    }
    if (inGt) ++out.descriptionsWithNeighborsInGt;
    if (identifiedNeighbor) ++out.descriptionsWithIdentifiedNeighbors;
  }

  for (const auto& [a, b] : fnPairs) {
    bool matchingNeighbors = false;
    for (EntityIndex na : neighbors[a]) {
      for (EntityIndex nb : neighbors[b]) {
        if (gt.contains(universe.at(na).id, universe.at(nb).id)) {
          matchingNeighbors = true;
          break;
        }
      }
      if (matchingNeighbors) break;
    }
    if (matchingNeighbors) ++out.pairsWithMatchingNeighbors;

    bool commonIdentified = false;
    auto itA = identifiedPartners.find(universe.at(a).id);
    if (itA != identifiedPartners.end()) {
      const auto& idB = universe.at(b).id;
      for (const auto& partner : itA->second) {
        if (identifiedSet.count(make_id_pair(idB, partner))) {
          commonIdentified = true;
          break;
        }
      }
    }
    if (commonIdentified) ++out.pairsWithCommonIdentifiedMatch;
  }

  const double descTotal = static_cast<double>(out.fnDescriptions);
  const double pairTotal = static_cast<double>(out.fnPairs);
  out.fracDescriptionsWithNeighbors =
      static_cast<double>(out.descriptionsWithNeighbors) / descTotal;
  out.fracDescriptionsWithNeighborsInGt =
      static_cast<double>(out.descriptionsWithNeighborsInGt) / descTotal;
  out.fracDescriptionsWithIdentifiedNeighbors =
      static_cast<double>(out.descriptionsWithIdentifiedNeighbors) / descTotal;
  out.fracPairsWithMatchingNeighbors =
      static_cast<double>(out.pairsWithMatchingNeighbors) / pairTotal;
  out.fracPairsWithCommonIdentifiedMatch =
      static_cast<double>(out.pairsWithCommonIdentifiedMatch) / pairTotal;
  return out;
}

StructuralSample sample_structural_analysis(const GroundTruth& gt,
                                            const EntityCollection& collection,
                                            std::uint64_t sampleSize,
                                            std::uint64_t seed) {
  const auto neighbors = neighborIndex(collection);

  std::vector<std::pair<EntityIndex, EntityIndex>> matches;
  for (const auto& [a, b] : gt.pairs()) {
    const auto ia = collection.indexOf(a);
    const auto ib = collection.indexOf(b);
    if (ia && ib && pairEligible(collection, *ia, *ib)) {
      matches.emplace_back(*ia, *ib);
    }
  }

  StructuralSample out;
  out.requestedSampleSize = sampleSize;
  std::mt19937_64 rng(seed);

  auto sampleFrom = [&rng](std::vector<std::pair<EntityIndex, EntityIndex>>& pool,
                           std::uint64_t k) {
    if (k >= pool.size()) return pool;  // exhaustive, seed-independent
    // Partial Fisher-Yates keeps the draw deterministic for a given seed.
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t j =
          i + rng() % (pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    return std::vector<std::pair<EntityIndex, EntityIndex>>(pool.begin(),
                                                            pool.begin() + k);
  };

  auto sampledMatches = sampleFrom(matches, sampleSize);
  out.sampledMatches = sampledMatches.size();
  if (sampledMatches.size() < sampleSize) out.clipped = true;

  // Non-matches: enumerate when the pair space is small, otherwise reject-
  // sample distinct eligible pairs.
  const std::uint64_t totalPairs = comparisons_without_blocking(collection);
  const std::uint64_t nonMatchPopulation =
      totalPairs >= matches.size() ? totalPairs - matches.size() : 0;
  std::vector<std::pair<EntityIndex, EntityIndex>> sampledNonMatches;
  const auto n = static_cast<EntityIndex>(collection.size());
  auto isMatch = [&](EntityIndex a, EntityIndex b) {
    return gt.contains(collection.at(a).id, collection.at(b).id);
  };
  if (totalPairs <= 2'000'000) {
    std::vector<std::pair<EntityIndex, EntityIndex>> pool;
    for (EntityIndex i = 0; i < n; ++i) {
      for (EntityIndex j = i + 1; j < n; ++j) {
        if (pairEligible(collection, i, j) && !isMatch(i, j)) {
          pool.emplace_back(i, j);
        }
      }
    }
    sampledNonMatches = sampleFrom(pool, sampleSize);
  } else if (n >= 2) {
    std::set<std::uint64_t> taken;
    std::uint64_t attempts = 0;
    const std::uint64_t maxAttempts = sampleSize * 200 + 1000;
    while (taken.size() < std::min(sampleSize, nonMatchPopulation) &&
           attempts++ < maxAttempts) {
      const auto a = static_cast<EntityIndex>(rng() % n);
      const auto b = static_cast<EntityIndex>(rng() % n);
      if (a == b || !pairEligible(collection, a, b) || isMatch(a, b)) continue;
      if (taken.insert(packPair(a, b)).second) {
        sampledNonMatches.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
  }
  out.sampledNonMatches = sampledNonMatches.size();
  if (out.sampledNonMatches < sampleSize) out.clipped = true;

  auto analyze = [&](const std::vector<std::pair<EntityIndex, EntityIndex>>& pairs,
                     std::uint64_t& withNeighbors, double& medianCount,
                     std::uint64_t& withMatchingNeighbors) {
    std::vector<std::uint64_t> neighborPairCounts;
    neighborPairCounts.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
      const auto& na = neighbors[a];
      const auto& nb = neighbors[b];
      if (!na.empty() && !nb.empty()) ++withNeighbors;
      neighborPairCounts.push_back(static_cast<std::uint64_t>(na.size()) *
                                   nb.size());
      bool matching = false;
      for (EntityIndex x : na) {
        for (EntityIndex y : nb) {
          if (x != y &&
              gt.contains(collection.at(x).id, collection.at(y).id)) {
            matching = true;
            break;
          }
        }
        if (matching) break;
      }
      if (matching) ++withMatchingNeighbors;
    }
    medianCount = medianOf(std::move(neighborPairCounts));
  };

  analyze(sampledMatches, out.matchesWithNeighbors,
          out.medianNeighborPairsMatches, out.matchesWithMatchingNeighbors);
  analyze(sampledNonMatches, out.nonMatchesWithNeighbors,
          out.medianNeighborPairsNonMatches,
          out.nonMatchesWithMatchingNeighbors);
  return out;
}

}  // namespace erblock
