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
// Shared fixtures and independent brute-force oracles for the test suites.
// The oracles deliberately avoid the library's candidate-pair and scoring
// paths so they can check them.

#ifndef ERBLOCK_TESTS_HELPERS_HPP_
#define ERBLOCK_TESTS_HELPERS_HPP_

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "erblock/eval.hpp"
#include "erblock/model.hpp"
#include "erblock/tokenize.hpp"

namespace erblock_test {

using namespace erblock;

inline EntityDescription desc(std::string id, std::string source,
                              std::vector<std::pair<std::string, std::string>>
                                  literals,
                              std::vector<std::pair<std::string, std::string>>
                                  resources = {}) {
  EntityDescription d;
  d.id = std::move(id);
  d.source = std::move(source);
  for (auto& [attr, text] : literals) {
    d.pairs.push_back({attr, Value{ValueKind::literal, text}});
  }
  for (auto& [attr, text] : resources) {
    d.pairs.push_back({attr, Value{ValueKind::resource, text}});
  }
  return d;
}

// The seven-landmark micro collection used across the suites.
inline std::vector<EntityDescription> landmarkDescriptions(bool split) {
  auto src = [&](int i) -> std::string {
    if (!split) return "D";
    return i <= 4 ? "D1" : "D2";
  };
  return {
      desc("e1", src(1),
           {{"about", "Eiffel Tower"},
            {"architect", "Sauvestre"},
            {"year", "1889"},
            {"located", "Paris"}}),
      desc("e2", src(2),
           {{"about", "Statue of Liberty"},
            {"architect", "Bartholdi Eiffel"},
            {"year", "1886"},
            {"located", "NY"}}),
      desc("e3", src(3),
           {{"about", "Auguste Bartholdi"}, {"born", "1834"}, {"work", "Paris"}}),
      desc("e4", src(4), {{"about", "Joan Tower"}, {"born", "1938"}}),
      desc("e5", src(5),
           {{"work", "Lady Liberty"}, {"artist", "Bartholdi"}, {"location", "NY"}}),
      desc("e6", src(6),
           {{"work", "Eiffel Tower"},
            {"year-constructed", "1889"},
            {"location", "Paris"}}),
      desc("e7", src(7),
           {{"work", "Bartholdi Fountain"},
            {"year-constructed", "1876"},
            {"location", "Washington"}}),
  };
}

inline std::shared_ptr<const EntityCollection> landmarksDirty() {
  return std::make_shared<EntityCollection>(landmarkDescriptions(false),
                                            CollectionMode::dirty,
                                            std::vector<std::string>{"D"});
}

inline std::shared_ptr<const EntityCollection> landmarksClean() {
  return std::make_shared<EntityCollection>(
      landmarkDescriptions(true), CollectionMode::clean_clean,
      std::vector<std::string>{"D1", "D2"});
}

// The landmarks plus the abbreviated statue description.
inline std::shared_ptr<const EntityCollection> landmarksWithStatueDirty() {
  auto descriptions = landmarkDescriptions(false);
  descriptions.push_back(desc("e8", "D",
                              {{"work", "Statue of Lib."},
                               {"architect", "Eiffel"},
                               {"year-constructed", "1886"}}));
  return std::make_shared<EntityCollection>(std::move(descriptions),
                                            CollectionMode::dirty,
                                            std::vector<std::string>{"D"});
}

// ---- independent oracles -------------------------------------------------

// Closure by breadth-first search, independent of the union-find path.
inline std::vector<IdPair> bfsClosure(const std::vector<IdPair>& pairs) {
  std::map<std::string, std::set<std::string>> adjacency;
  for (const auto& [a, b] : pairs) {
    adjacency[a].insert(b);
    adjacency[b].insert(a);
  }
  std::set<std::string> visited;
  std::vector<IdPair> out;
  for (const auto& [start, unused] : adjacency) {
    if (visited.count(start)) continue;
    std::vector<std::string> component, frontier{start};
    visited.insert(start);
    while (!frontier.empty()) {
      const std::string node = frontier.back();
      frontier.pop_back();
      component.push_back(node);
      for (const auto& next : adjacency[node]) {
        if (visited.insert(next).second) frontier.push_back(next);
      }
    }
    std::sort(component.begin(), component.end());
    for (std::size_t i = 0; i < component.size(); ++i) {
      for (std::size_t j = i + 1; j < component.size(); ++j) {
        out.emplace_back(component[i], component[j]);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Candidate detection by scanning every block for each pair.
inline bool coOccurs(const BlockingCollection& blocks, EntityIndex a,
                     EntityIndex b) {
  for (const auto& block : blocks.blocks()) {
    if (!block.comparable) continue;
    const bool hasA =
        std::find(block.members.begin(), block.members.end(), a) !=
        block.members.end();
    const bool hasB =
        std::find(block.members.begin(), block.members.end(), b) !=
        block.members.end();
    if (hasA && hasB) return true;
  }
  return false;
}

inline bool pairEligible(const EntityCollection& universe, EntityIndex a,
                         EntityIndex b) {
  if (universe.mode() != CollectionMode::clean_clean) return true;
  return universe.sourceIndexOf(a) != universe.sourceIndexOf(b);
}

inline std::vector<IdPair> bruteCandidatePairs(const BlockingCollection& blocks) {
  const auto& universe = blocks.universe();
  std::vector<IdPair> out;
  for (EntityIndex i = 0; i < universe.size(); ++i) {
    for (EntityIndex j = i + 1; j < universe.size(); ++j) {
      if (pairEligible(universe, i, j) && coOccurs(blocks, i, j)) {
        out.push_back(make_id_pair(universe.at(i).id, universe.at(j).id));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct BruteScore {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::uint64_t aggregate = 0, distinct = 0, total = 0;
  double recall = 0, precision = 0, fmeasure = 0;
  double rrAggregate = 0, rrDistinct = 0;
};

// Full pair enumeration with direct counting.
inline BruteScore bruteScore(const BlockingCollection& blocks,
                             const GroundTruth& gt) {
  const auto& universe = blocks.universe();
  BruteScore s;
  for (EntityIndex i = 0; i < universe.size(); ++i) {
    for (EntityIndex j = i + 1; j < universe.size(); ++j) {
      if (!pairEligible(universe, i, j)) continue;
      ++s.total;
      const bool candidate = coOccurs(blocks, i, j);
      const bool match = gt.contains(universe.at(i).id, universe.at(j).id);
      if (candidate && match) ++s.tp;
      else if (candidate) ++s.fp;
      else if (match) ++s.fn;
      else ++s.tn;
      if (candidate) ++s.distinct;
    }
  }
  for (const auto& block : blocks.blocks()) {
    if (!block.comparable) continue;
    for (std::size_t i = 0; i < block.members.size(); ++i) {
      for (std::size_t j = i + 1; j < block.members.size(); ++j) {
        if (pairEligible(universe, block.members[i], block.members[j])) {
          ++s.aggregate;
        }
      }
    }
  }
  s.recall = s.tp + s.fn == 0 ? 0.0 : double(s.tp) / double(s.tp + s.fn);
  s.precision = s.tp + s.fp == 0 ? 0.0 : double(s.tp) / double(s.tp + s.fp);
  s.fmeasure = s.precision + s.recall == 0.0
                   ? 0.0
                   : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  s.rrAggregate = 1.0 - double(s.aggregate) / double(s.total);
  s.rrDistinct = 1.0 - double(s.distinct) / double(s.total);
  return s;
}

// ---- random fixtures -----------------------------------------------------

inline std::shared_ptr<const EntityCollection> randomCollection(
    std::mt19937_64& rng, std::size_t maxDescriptions = 50,
    std::size_t maxTokens = 20, bool cleanClean = false) {
  std::uniform_int_distribution<std::size_t> nDist(2, maxDescriptions);
  const std::size_t n = nDist(rng);
  std::uniform_int_distribution<int> tokenDist(0, 39);
  std::uniform_int_distribution<int> attrDist(0, 7);
  std::vector<EntityDescription> descriptions;
  for (std::size_t i = 0; i < n; ++i) {
    EntityDescription d;
    d.id = "id" + std::to_string(i);
    d.source = cleanClean ? (i % 2 == 0 ? "A" : "B") : "A";
    std::uniform_int_distribution<std::size_t> kDist(0, maxTokens);
    const std::size_t k = kDist(rng);
    std::string text;
    for (std::size_t t = 0; t < k; ++t) {
      if (!text.empty()) text.push_back(' ');
      text += "t" + std::to_string(tokenDist(rng));
      if (t % 3 == 2 || t + 1 == k) {
        d.pairs.push_back({"a" + std::to_string(attrDist(rng)),
                           Value{ValueKind::literal, text}});
        text.clear();
      }
    }
    descriptions.push_back(std::move(d));
  }
  if (cleanClean) {
    // Attribute clustering needs at least one attribute per source.
    bool hasPairs[2] = {false, false};
    for (const auto& d : descriptions) {
      hasPairs[d.source == "B"] |= !d.pairs.empty();
    }
    for (auto& d : descriptions) {
      const int s = d.source == "B";
      if (!hasPairs[s]) {
        d.pairs.push_back({"a0", Value{ValueKind::literal, "filler"}});
        hasPairs[s] = true;
      }
    }
    return std::make_shared<EntityCollection>(
        std::move(descriptions), CollectionMode::clean_clean,
        std::vector<std::string>{"A", "B"});
  }
  return std::make_shared<EntityCollection>(std::move(descriptions),
                                            CollectionMode::dirty,
                                            std::vector<std::string>{"A"});
}

inline GroundTruth randomGroundTruth(std::mt19937_64& rng,
                                     const EntityCollection& collection) {
  std::vector<IdPair> raw;
  if (collection.size() >= 2) {
    std::uniform_int_distribution<std::size_t> count(0, collection.size() / 2);
    std::uniform_int_distribution<std::size_t> pick(0, collection.size() - 1);
    const std::size_t k = count(rng);
    for (std::size_t i = 0; i < k; ++i) {
      const auto a = pick(rng), b = pick(rng);
      if (a == b) continue;
      if (collection.mode() == CollectionMode::clean_clean &&
          collection.sourceIndexOf(static_cast<EntityIndex>(a)) ==
              collection.sourceIndexOf(static_cast<EntityIndex>(b))) {
        continue;
      }
      raw.push_back(make_id_pair(collection.at(static_cast<EntityIndex>(a)).id,
                                 collection.at(static_cast<EntityIndex>(b)).id));
    }
  }
  return GroundTruth("test", std::move(raw));
}

}  // namespace erblock_test

#endif  // ERBLOCK_TESTS_HELPERS_HPP_
