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

#include "erblock/blocking.hpp"

#include <algorithm>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "erblock/errors.hpp"

namespace erblock {

namespace {

void applyComparableFlags(std::vector<Block>& blocks,
                          const EntityCollection& universe) {
  if (universe.mode() != CollectionMode::clean_clean) return;
  for (auto& block : blocks) {
    const int first = universe.sourceIndexOf(block.members.front());
    block.comparable = std::any_of(
        block.members.begin(), block.members.end(),
        [&](EntityIndex m) { return universe.sourceIndexOf(m) != first; });
  }
}

std::vector<EntityIndex> allIndices(const EntityCollection& collection) {
  std::vector<EntityIndex> indices(collection.size());
  std::iota(indices.begin(), indices.end(), 0);
  return indices;
}

// Shared reduce step: one block per key, members sorted and de-duplicated.
std::vector<Block> blocksFromKeyedIndices(
    const engine::PartitionedDataset<EntityIndex>& partitioned,
    const std::function<std::vector<std::pair<std::string, EntityIndex>>(
        EntityIndex)>& mapFn,
    const std::function<BlockKey(const std::string&)>& keyFn,
    const engine::EngineOptions& options) {
  auto reduceFn = [&keyFn](const std::string& key,
                           const std::vector<EntityIndex>& members)
      -> std::vector<Block> {
    Block block;
    block.key = keyFn(key);
    block.members = members;
    std::sort(block.members.begin(), block.members.end());
    block.members.erase(
        std::unique(block.members.begin(), block.members.end()),
        block.members.end());
    return {std::move(block)};
  };
  return engine::map_group_reduce(partitioned, mapFn, reduceFn, options);
}

}  // namespace

BlockingCollection token_blocking(
    std::shared_ptr<const EntityCollection> collection,
    const TokenizerConfig& config, const engine::EngineOptions& options) {
  const EntityCollection& universe = *collection;
  auto partitioned = engine::PartitionedDataset<EntityIndex>::split(
      allIndices(universe), engine::resolve_workers(options) * 4);

  auto mapFn = [&universe, &config](EntityIndex i)
      -> std::vector<std::pair<std::string, EntityIndex>> {
    std::set<std::string> seen;
    for (const auto& pair : universe.at(i).pairs) {
      for (auto& token : tokenize(pair.value, config)) {
        seen.insert(std::move(token));
      }
    }
    std::vector<std::pair<std::string, EntityIndex>> out;
    out.reserve(seen.size());
    for (const auto& token : seen) out.emplace_back(token, i);
    return out;
  };
  auto keyFn = [](const std::string& key) {
    return BlockKey{BlockKeyNamespace::token, std::nullopt, key};
  };
  auto blocks = blocksFromKeyedIndices(partitioned, mapFn, keyFn, options);
  applyComparableFlags(blocks, universe);
  return BlockingCollection(std::move(collection), std::move(blocks));
}

AttributeProfiles attribute_profile(const EntityCollection& collection) {
  std::map<std::string, std::map<std::string, std::set<std::string>>> values;
  for (const auto& d : collection.descriptions()) {
    for (const auto& p : d.pairs) {
      values[d.source][p.attribute].insert(p.value.text);
    }
  }
  AttributeProfiles profiles;
  for (const auto& [source, attrs] : values) {
    for (const auto& [attr, vals] : attrs) {
      std::string concat;
      for (const auto& v : vals) {
        if (!concat.empty()) concat.push_back(' ');
        concat += v;
      }
      profiles[source][attr] = std::move(concat);
    }
  }
  return profiles;
}

std::optional<std::uint32_t> AttributeClustering::clusterOf(
    int source, const std::string& attribute) const {
  auto it = assignment.find({source, attribute});
  if (it == assignment.end()) return std::nullopt;
  return it->second;
}

std::map<std::uint32_t, std::size_t> AttributeClustering::clusterSizes() const {
  std::map<std::uint32_t, std::size_t> sizes;
  for (const auto& [attr, cluster] : assignment) {
    if (cluster != kGlueCluster) ++sizes[cluster];
  }
  return sizes;
}

AttributeClustering attribute_clustering(
    const EntityCollection& collection, const engine::EngineOptions& options,
    const AttributeClusteringOptions& clusteringOptions) {
  if (collection.mode() != CollectionMode::clean_clean) {
    throw ConfigError("attribute clustering requires a clean-clean collection");
  }
  const auto profiles = attribute_profile(collection);

  struct Attr {
    int source;
    std::string name;
    std::vector<std::string> grams;
  };
  std::vector<Attr> attrs;
  std::size_t perSource[2] = {0, 0};
  for (int s = 0; s < 2; ++s) {
    auto it = profiles.find(collection.sources()[s]);
    if (it == profiles.end()) continue;
    for (const auto& [name, text] : it->second) {
      attrs.push_back(Attr{s, name, trigrams(text)});
      ++perSource[s];
    }
  }
  if (perSource[0] == 0 || perSource[1] == 0) {
    throw DataError("attribute clustering is undefined for a source with no attributes");
  }

  // Cross-source similarities, each unordered pair scored exactly once via
  // the partition-pair task scheme.
  const unsigned workers = engine::resolve_workers(options);
  const std::size_t partitionCount =
      std::max<std::size_t>(1, std::min<std::size_t>(workers, attrs.size()));
  std::vector<std::vector<std::size_t>> partitions(partitionCount);
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    partitions[i % partitionCount].push_back(i);
  }
  const auto tasks = engine::pairwise_tasks(partitionCount);

  std::vector<std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>>>
      perTask(tasks.size());
  engine::parallel_for(tasks.size(), workers, [&](std::size_t t) {
    const auto [left, right] = tasks[t];
    auto& out = perTask[t];
    auto score = [&](std::size_t i, std::size_t j) {
      if (attrs[i].source == attrs[j].source) return;
      const double sim = jaccard(attrs[i].grams, attrs[j].grams);
      if (sim > 0.0) out.push_back({{i, j}, sim});
    };
    if (left == right) {
      const auto& part = partitions[left];
      for (std::size_t a = 0; a < part.size(); ++a) {
        for (std::size_t b = a + 1; b < part.size(); ++b) {
          score(part[a], part[b]);
        }
      }
    } else {
      for (std::size_t i : partitions[left]) {
        for (std::size_t j : partitions[right]) score(i, j);
      }
    }
  });

  // Best match per attribute; ties go to the lexicographically smallest
  // attribute name on the other side.
  std::vector<double> bestSim(attrs.size(), 0.0);
  std::vector<std::size_t> bestOther(attrs.size(), attrs.size());
  auto consider = [&](std::size_t self, std::size_t other, double sim) {
    if (sim > bestSim[self] ||
        (sim == bestSim[self] && bestOther[self] < attrs.size() &&
         attrs[other].name < attrs[bestOther[self]].name)) {
      bestSim[self] = sim;
      bestOther[self] = other;
    }
  };
  for (const auto& taskResults : perTask) {
    for (const auto& [pair, sim] : taskResults) {
      consider(pair.first, pair.second, sim);
      consider(pair.second, pair.first, sim);
    }
  }

  // Reciprocal best matches become edges; connected components, clusters.
  std::vector<std::size_t> parent(attrs.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const std::size_t j = bestOther[i];
    if (j < attrs.size() && bestSim[i] > 0.0 && bestOther[j] == i) {
      parent[find(i)] = find(j);
    }
  }

  AttributeClustering clustering;
  std::vector<bool> isGlue(attrs.size(), false);
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    isGlue[i] = bestSim[i] == 0.0 && clusteringOptions.glueForZeroSimilarity;
  }
  // Number components 1..K by their smallest (source, name) member.
  std::unordered_map<std::size_t, std::pair<int, std::string>> anchorOfRoot;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (isGlue[i]) continue;
    const std::size_t root = find(i);
    auto key = std::make_pair(attrs[i].source, attrs[i].name);
    auto it = anchorOfRoot.find(root);
    if (it == anchorOfRoot.end() || key < it->second) anchorOfRoot[root] = key;
  }
  std::map<std::pair<int, std::string>, std::size_t> rootByAnchor;
  for (const auto& [root, anchor] : anchorOfRoot) rootByAnchor[anchor] = root;
  std::unordered_map<std::size_t, std::uint32_t> clusterOfRoot;
  std::uint32_t nextCluster = 1;
  for (const auto& [anchor, root] : rootByAnchor) {
    clusterOfRoot[root] = nextCluster++;
  }
  clustering.clusterCount = nextCluster - 1;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const std::uint32_t cluster =
        isGlue[i] ? AttributeClustering::kGlueCluster : clusterOfRoot.at(find(i));
    clustering.assignment[{attrs[i].source, attrs[i].name}] = cluster;
  }
  return clustering;
}

BlockingCollection attribute_clustering_blocking(
    std::shared_ptr<const EntityCollection> collection,
    const TokenizerConfig& config, const engine::EngineOptions& options,
    const AttributeClustering* precomputed) {
  const EntityCollection& universe = *collection;
  AttributeClustering local;
  if (!precomputed) {
    local = attribute_clustering(universe, options);
    precomputed = &local;
  }
  const AttributeClustering& clustering = *precomputed;

  auto partitioned = engine::PartitionedDataset<EntityIndex>::split(
      allIndices(universe), engine::resolve_workers(options) * 4);

  auto mapFn = [&universe, &config, &clustering](EntityIndex i)
      -> std::vector<std::pair<std::string, EntityIndex>> {
    const auto& d = universe.at(i);
    const int source = universe.sourceIndexOf(i);
    std::set<std::string> keys;
    for (const auto& pair : d.pairs) {
      const auto cluster = clustering.clusterOf(source, pair.attribute);
      if (!cluster) {
        throw DataError("attribute '" + pair.attribute +
                        "' missing from the attribute clustering");
      }
      for (const auto& token : tokenize(pair.value, config)) {
        keys.insert(std::to_string(*cluster) + ":" + token);
      }
    }
    std::vector<std::pair<std::string, EntityIndex>> out;
    out.reserve(keys.size());
    for (const auto& key : keys) out.emplace_back(key, i);
    return out;
  };
  auto keyFn = [](const std::string& key) {
    const auto colon = key.find(':');
    return BlockKey{BlockKeyNamespace::clustered_token,
                    static_cast<std::uint32_t>(
                        std::stoul(key.substr(0, colon))),
                    key.substr(colon + 1)};
  };
  auto blocks = blocksFromKeyedIndices(partitioned, mapFn, keyFn, options);
  applyComparableFlags(blocks, universe);
  return BlockingCollection(std::move(collection), std::move(blocks));
}

BlockingCollection pis_blocking(
    std::shared_ptr<const EntityCollection> collection,
    const TokenizerConfig& config, const engine::EngineOptions& options) {
  const EntityCollection& universe = *collection;

  // Prefixes are learned over every URI in the collection: subject ids and
  // resource-valued objects.
  std::vector<std::string> population;
  population.reserve(universe.size());
  for (const auto& d : universe.descriptions()) {
    population.push_back(d.id);
    for (const auto& p : d.pairs) {
      if (p.value.kind == ValueKind::resource) population.push_back(p.value.text);
    }
  }
  const PrefixTable table = PrefixTable::learn(population);

  auto partitioned = engine::PartitionedDataset<EntityIndex>::split(
      allIndices(universe), engine::resolve_workers(options) * 4);

  auto mapFn = [&universe, &config, &table](EntityIndex i)
      -> std::vector<std::pair<std::string, EntityIndex>> {
    const auto& d = universe.at(i);
    std::set<std::string> keys;
    for (const auto& pair : d.pairs) {
      if (pair.value.kind != ValueKind::literal) continue;
      for (const auto& token : tokenize_text(pair.value.text, config)) {
        keys.insert("t" + token);
      }
    }
    // A description joins the infix block of its own subject URI; ids
    // without a scheme://host shape take no part in infix blocking.
    if (PrefixTable::second_token(d.id)) {
      keys.insert("i" + table.decompose(d.id).infix);
    }
    std::vector<std::pair<std::string, EntityIndex>> out;
    out.reserve(keys.size());
    for (const auto& key : keys) out.emplace_back(key, i);
    return out;
  };
  auto keyFn = [](const std::string& key) {
    return BlockKey{key[0] == 't' ? BlockKeyNamespace::token
                                  : BlockKeyNamespace::infix,
                    std::nullopt, key.substr(1)};
  };
  auto blocks = blocksFromKeyedIndices(partitioned, mapFn, keyFn, options);
  applyComparableFlags(blocks, universe);
  return BlockingCollection(std::move(collection), std::move(blocks));
}

std::string MergedEntity::displayId() const {
  if (memberIds.size() == 1) return memberIds.front();
  std::string id = "m:";
  for (std::size_t i = 0; i < memberIds.size(); ++i) {
    if (i > 0) id.push_back('+');
    id += memberIds[i];
  }
  return id;
}

MatchOracle MatchOracle::groundTruth(const GroundTruth& gt) {
  MatchOracle oracle;
  oracle.kind_ = Kind::ground_truth;
  oracle.gt_ = &gt;
  return oracle;
}

MatchOracle MatchOracle::valueSimilarity(double threshold) {
  MatchOracle oracle;
  oracle.kind_ = Kind::value_similarity;
  oracle.threshold_ = threshold;
  return oracle;
}

bool MatchOracle::match(const EntityCollection& universe,
                        const std::vector<EntityIndex>& a,
                        const std::vector<EntityIndex>& b) const {
  if (kind_ == Kind::ground_truth) {
    for (EntityIndex i : a) {
      for (EntityIndex j : b) {
        if (gt_->contains(universe.at(i).id, universe.at(j).id)) return true;
      }
    }
    return false;
  }
  auto gramsOf = [&universe](const std::vector<EntityIndex>& members) {
    std::string text;
    for (EntityIndex m : members) {
      for (const auto& p : universe.at(m).pairs) {
        text += p.value.text;
        text.push_back(' ');
      }
    }
    return trigrams(text);
  };
  return jaccard(gramsOf(a), gramsOf(b)) >= threshold_;
}

namespace {

std::string blockOrderKey(const BlockKey& key) {
  std::string bytes = std::string(to_string(key.ns));
  bytes.push_back('\x1f');
  if (key.clusterId) bytes += std::to_string(*key.clusterId);
  bytes.push_back('\x1f');
  bytes += key.term;
  return bytes;
}

}  // namespace

std::vector<MergedEntity> iterative_blocking(
    const BlockingCollection& blocks, const MatchOracle& oracle,
    BlockOrder order, const std::vector<std::vector<std::string>>* initialGroups,
    IterativeStats* stats) {
  const EntityCollection& universe = blocks.universe();
  const std::size_t n = universe.size();

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<std::vector<EntityIndex>> membersOf(n);
  std::vector<std::uint64_t> version(n, 0);
  for (EntityIndex i = 0; i < n; ++i) membersOf[i] = {i};

  IterativeStats localStats;
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    auto& into = membersOf[a];
    into.insert(into.end(), membersOf[b].begin(), membersOf[b].end());
    std::sort(into.begin(), into.end());
    membersOf[b].clear();
    ++version[a];
    ++localStats.merges;
  };

  if (initialGroups) {
    for (const auto& group : *initialGroups) {
      std::optional<EntityIndex> first;
      for (const auto& id : group) {
        const auto idx = universe.indexOf(id);
        if (!idx) throw DataError("initial group id '" + id + "' not in universe");
        if (first) {
          unite(*first, *idx);
        } else {
          first = idx;
        }
      }
    }
    localStats.merges = 0;  // only count merges found by this run
  }

  // Deterministic processing order; singleton blocks are skipped.
  std::vector<std::size_t> blockOrder;
  for (std::size_t b = 0; b < blocks.blocks().size(); ++b) {
    if (blocks.blocks()[b].members.size() >= 2) blockOrder.push_back(b);
  }
  std::sort(blockOrder.begin(), blockOrder.end(), [&](std::size_t a, std::size_t b) {
    const auto& ba = blocks.blocks()[a];
    const auto& bb = blocks.blocks()[b];
    if (order == BlockOrder::sizeDescending &&
        ba.members.size() != bb.members.size()) {
      return ba.members.size() > bb.members.size();
    }
    return blockOrderKey(ba.key) < blockOrderKey(bb.key);
  });

  using Handle = std::pair<std::size_t, std::uint64_t>;  // (root, version)
  std::set<std::pair<Handle, Handle>> compared;

  bool mergedInPass = true;
  while (mergedInPass) {
    mergedInPass = false;
    ++localStats.passes;
    for (std::size_t b : blockOrder) {
      const auto& block = blocks.blocks()[b];
      bool blockChanged = true;
      while (blockChanged) {
        blockChanged = false;
        std::vector<std::size_t> roots;
        for (EntityIndex m : block.members) roots.push_back(find(m));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        if (roots.size() < 2) break;
        for (std::size_t i = 0; i < roots.size() && !blockChanged; ++i) {
          for (std::size_t j = i + 1; j < roots.size(); ++j) {
            Handle ha{roots[i], version[roots[i]]};
            Handle hb{roots[j], version[roots[j]]};
            if (hb < ha) std::swap(ha, hb);
            if (!compared.insert({ha, hb}).second) continue;
            ++localStats.comparisons;
            if (oracle.match(universe, membersOf[roots[i]], membersOf[roots[j]])) {
              unite(roots[i], roots[j]);
              mergedInPass = true;
              blockChanged = true;
              break;
            }
          }
        }
      }
    }
  }

  std::vector<MergedEntity> partition;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) != i) continue;
    MergedEntity entity;
    for (EntityIndex m : membersOf[i]) {
      entity.memberIds.push_back(universe.at(m).id);
      entity.pairs.insert(entity.pairs.end(), universe.at(m).pairs.begin(),
                          universe.at(m).pairs.end());
    }
    std::sort(entity.memberIds.begin(), entity.memberIds.end());
    std::sort(entity.pairs.begin(), entity.pairs.end());
    partition.push_back(std::move(entity));
  }
  std::sort(partition.begin(), partition.end(),
            [](const MergedEntity& a, const MergedEntity& b) {
              return a.memberIds.front() < b.memberIds.front();
            });
  if (stats) *stats = localStats;
  return partition;
}

void write_blocks_jsonl(std::ostream& out, const BlockingCollection& blocks) {
  for (const auto& block : blocks.blocks()) {
    nlohmann::ordered_json record;
    record["namespace"] = std::string(to_string(block.key.ns));
    if (block.key.clusterId) record["clusterId"] = *block.key.clusterId;
    record["term"] = block.key.term;
    std::vector<std::string> ids;
    ids.reserve(block.members.size());
    for (EntityIndex m : block.members) ids.push_back(blocks.universe().at(m).id);
    std::sort(ids.begin(), ids.end());
    record["members"] = std::move(ids);
    out << record.dump() << '\n';
  }
}

BlockingCollection read_blocks_jsonl(
    std::istream& in, std::shared_ptr<const EntityCollection> universe) {
  std::vector<Block> blocks;
  std::string line;
  std::uint64_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("blocks line " + std::to_string(lineNumber) + ": " + e.what());
    }
    Block block;
    const std::string ns = record.at("namespace").get<std::string>();
    if (ns == "token") {
      block.key.ns = BlockKeyNamespace::token;
    } else if (ns == "clustered-token") {
      block.key.ns = BlockKeyNamespace::clustered_token;
      block.key.clusterId = record.at("clusterId").get<std::uint32_t>();
    } else if (ns == "infix") {
      block.key.ns = BlockKeyNamespace::infix;
    } else {
      throw DataError("blocks line " + std::to_string(lineNumber) +
                      ": unknown namespace '" + ns + "'");
    }
    block.key.term = record.at("term").get<std::string>();
    for (const auto& id : record.at("members")) {
      const auto idx = universe->indexOf(id.get<std::string>());
      if (!idx) {
        throw DataError("blocks line " + std::to_string(lineNumber) +
                        ": member '" + id.get<std::string>() +
                        "' not in the collection");
      }
      block.members.push_back(*idx);
    }
    blocks.push_back(std::move(block));
  }
  applyComparableFlags(blocks, *universe);
  return BlockingCollection(std::move(universe), std::move(blocks));
}

void write_clustering_tsv(std::ostream& out, const EntityCollection& collection,
                          const AttributeClustering& clustering) {
  for (const auto& [key, cluster] : clustering.assignment) {
    out << collection.sources()[static_cast<std::size_t>(key.first)] << '\t'
        << key.second << '\t' << cluster << '\n';
  }
}

}  // namespace erblock
