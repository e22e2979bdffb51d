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

#include "erblock/model.hpp"

#include <algorithm>
#include <numeric>

#include "erblock/errors.hpp"

namespace erblock {

std::string_view to_string(ValueKind kind) {
  return kind == ValueKind::literal ? "literal" : "resource";
}

std::string_view to_string(CollectionMode mode) {
  return mode == CollectionMode::clean_clean ? "clean-clean" : "dirty";
}

std::string_view to_string(BlockKeyNamespace ns) {
  switch (ns) {
    case BlockKeyNamespace::token: return "token";
    case BlockKeyNamespace::clustered_token: return "clustered-token";
    case BlockKeyNamespace::infix: return "infix";
  }
  return "token";
}

void EntityDescription::canonicalize() {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

EntityCollection::EntityCollection(std::vector<EntityDescription> descriptions,
                                   CollectionMode mode,
                                   std::vector<std::string> sources)
    : descriptions_(std::move(descriptions)),
      mode_(mode),
      sources_(std::move(sources)) {
  if (mode_ == CollectionMode::clean_clean && sources_.size() != 2) {
    throw DataError("clean-clean collection requires exactly 2 sources, got " +
                    std::to_string(sources_.size()));
  }
  if (sources_.empty()) {
    throw DataError("collection requires at least one source tag");
  }
  std::unordered_map<std::string_view, int> sourcePos;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (!sourcePos.emplace(sources_[i], static_cast<int>(i)).second) {
      throw DataError("duplicate source tag '" + sources_[i] + "'");
    }
  }
  for (auto& d : descriptions_) {
    if (d.id.empty()) throw DataError("description with empty id");
    if (!sourcePos.count(d.source)) {
      throw DataError("description '" + d.id + "' has unknown source '" +
                      d.source + "'");
    }
    for (const auto& p : d.pairs) {
      if (p.attribute.empty()) {
        throw DataError("description '" + d.id + "' has an empty attribute name");
      }
      if (p.value.kind == ValueKind::resource) {
        const auto& text = p.value.text;
        const bool uriLike =
            !text.empty() &&
            text.find_first_of(" \t\n\r<>\"") == std::string::npos;
        if (!uriLike) {
          throw DataError("description '" + d.id +
                          "' has a resource value that is not a URI reference");
        }
      }
    }
    d.canonicalize();
  }
  std::sort(descriptions_.begin(), descriptions_.end(),
            [&](const EntityDescription& a, const EntityDescription& b) {
              int sa = sourcePos.at(a.source), sb = sourcePos.at(b.source);
              if (sa != sb) return sa < sb;
              return a.id < b.id;
            });
  sourceIndex_.resize(descriptions_.size());
  sourceSizes_.assign(sources_.size(), 0);
  byId_.reserve(descriptions_.size());
  for (std::size_t i = 0; i < descriptions_.size(); ++i) {
    const auto& d = descriptions_[i];
    if (!byId_.emplace(d.id, static_cast<EntityIndex>(i)).second) {
      throw DataError("duplicate entity id '" + d.id + "' in collection");
    }
    sourceIndex_[i] = sourcePos.at(d.source);
    ++sourceSizes_[sourceIndex_[i]];
  }
}

std::optional<EntityIndex> EntityCollection::indexOf(std::string_view id) const {
  auto it = byId_.find(id);
  if (it == byId_.end()) return std::nullopt;
  return it->second;
}

std::unordered_set<std::string> EntityCollection::idSet() const {
  std::unordered_set<std::string> ids;
  ids.reserve(descriptions_.size());
  for (const auto& d : descriptions_) ids.insert(d.id);
  return ids;
}

BlockingCollection::BlockingCollection(
    std::shared_ptr<const EntityCollection> universe, std::vector<Block> blocks)
    : universe_(std::move(universe)), blocks_(std::move(blocks)) {
  if (!universe_) throw DataError("blocking collection requires a universe");
  const auto n = universe_->size();
  std::vector<bool> covered(n, false);
  std::sort(blocks_.begin(), blocks_.end(),
            [](const Block& a, const Block& b) { return a.key < b.key; });
  for (std::size_t b = 0; b + 1 < blocks_.size(); ++b) {
    if (blocks_[b].key == blocks_[b + 1].key) {
      throw DataError("duplicate block key '" + blocks_[b].key.term + "'");
    }
  }
  for (auto& block : blocks_) {
    if (block.key.term.empty()) throw DataError("block with empty key term");
    if ((block.key.ns == BlockKeyNamespace::clustered_token) !=
        block.key.clusterId.has_value()) {
      throw DataError("cluster id must be present exactly for clustered-token keys");
    }
    if (block.members.empty()) {
      throw DataError("empty block '" + block.key.term + "'");
    }
    std::sort(block.members.begin(), block.members.end());
    auto dup = std::unique(block.members.begin(), block.members.end());
    if (dup != block.members.end()) {
      throw DataError("repeated member in block '" + block.key.term + "'");
    }
    for (EntityIndex m : block.members) {
      if (m >= n) throw DataError("block member outside universe");
      covered[m] = true;
    }
  }
  for (EntityIndex i = 0; i < n; ++i) {
    if (!covered[i]) unblocked_.push_back(i);
  }
}

std::size_t BlockingCollection::comparableBlockCount() const {
  return static_cast<std::size_t>(
      std::count_if(blocks_.begin(), blocks_.end(),
                    [](const Block& b) { return b.comparable; }));
}

std::size_t BlockingCollection::blockCountFor(BlockKeyNamespace ns) const {
  return static_cast<std::size_t>(
      std::count_if(blocks_.begin(), blocks_.end(),
                    [ns](const Block& b) { return b.key.ns == ns; }));
}

bool BlockingCollection::checkCoverage() const {
  std::vector<bool> covered(universe_->size(), false);
  for (const auto& b : blocks_) {
    for (EntityIndex m : b.members) {
      if (m >= covered.size()) return false;
      covered[m] = true;
    }
  }
  for (EntityIndex m : unblocked_) {
    if (m >= covered.size() || covered[m]) return false;
    covered[m] = true;
  }
  return std::all_of(covered.begin(), covered.end(), [](bool c) { return c; });
}

IdPair make_id_pair(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

namespace {

// Plain union-find over dense int handles.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<IdPair> transitive_closure(const std::vector<IdPair>& pairs) {
  std::unordered_map<std::string, std::size_t> handle;
  std::vector<const std::string*> names;
  auto intern = [&](const std::string& id) {
    auto [it, inserted] = handle.emplace(id, names.size());
    if (inserted) names.push_back(&it->first);
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a == b) throw DataError("reflexive pair ('" + a + "') in closure input");
    edges.emplace_back(intern(a), intern(b));
  }
  UnionFind uf(names.size());
  for (auto [a, b] : edges) uf.unite(a, b);

  std::unordered_map<std::size_t, std::vector<std::string>> components;
  for (std::size_t i = 0; i < names.size(); ++i) {
    components[uf.find(i)].push_back(*names[i]);
  }
  std::vector<IdPair> closed;
  for (auto& [root, ids] : components) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        closed.emplace_back(ids[i], ids[j]);
      }
    }
  }
  std::sort(closed.begin(), closed.end());
  return closed;
}

GroundTruth::GroundTruth(std::string predicate, std::vector<IdPair> rawPairs)
    : predicate_(std::move(predicate)) {
  std::vector<IdPair> canonical;
  canonical.reserve(rawPairs.size());
  for (auto& [a, b] : rawPairs) {
    if (a == b) continue;
    canonical.push_back(make_id_pair(std::move(a), std::move(b)));
  }
  std::sort(canonical.begin(), canonical.end());
  canonical.erase(std::unique(canonical.begin(), canonical.end()),
                  canonical.end());
  pairs_ = transitive_closure(canonical);
  for (const auto& [a, b] : pairs_) {
    mentioned_.insert(a);
    mentioned_.insert(b);
  }
}

bool GroundTruth::contains(std::string_view a, std::string_view b) const {
  if (b < a) std::swap(a, b);
  IdPair probe{std::string(a), std::string(b)};
  return std::binary_search(pairs_.begin(), pairs_.end(), probe);
}

bool GroundTruth::mentions(std::string_view id) const {
  return mentioned_.count(std::string(id)) > 0;
}

GroundTruth GroundTruth::restrictedTo(
    const std::unordered_set<std::string>& ids) const {
  GroundTruth out;
  out.predicate_ = predicate_;
  for (const auto& p : pairs_) {
    if (ids.count(p.first) && ids.count(p.second)) {
      out.pairs_.push_back(p);
      out.mentioned_.insert(p.first);
      out.mentioned_.insert(p.second);
    }
  }
  return out;
}

}  // namespace erblock
