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
// Core domain types: entity descriptions, collections, blocks and ground
// truths.  Everything here is immutable after construction and safe to
// share across workers.

#ifndef ERBLOCK_MODEL_HPP_
#define ERBLOCK_MODEL_HPP_

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace erblock {

enum class ValueKind { literal, resource };

std::string_view to_string(ValueKind kind);

struct Value {
  ValueKind kind = ValueKind::literal;
  std::string text;

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value&, const Value&) = default;
};

struct AttributeValue {
  std::string attribute;
  Value value;

  friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
  friend auto operator<=>(const AttributeValue&, const AttributeValue&) = default;
};

// One entity: an identifier plus attribute-value pairs.  `pairs` is kept
// sorted and de-duplicated so equal descriptions compare equal.
struct EntityDescription {
  std::string id;
  std::string source;
  std::vector<AttributeValue> pairs;

  void canonicalize();

  friend bool operator==(const EntityDescription&, const EntityDescription&) = default;
};

enum class CollectionMode { clean_clean, dirty };

std::string_view to_string(CollectionMode mode);

using EntityIndex = std::uint32_t;

// A set of descriptions under clean-clean or dirty semantics.  Descriptions
// are stored sorted by (source position, id) so indices are deterministic.
class EntityCollection {
 public:
  EntityCollection(std::vector<EntityDescription> descriptions,
                   CollectionMode mode, std::vector<std::string> sources);

  CollectionMode mode() const { return mode_; }
  const std::vector<std::string>& sources() const { return sources_; }
  const std::vector<EntityDescription>& descriptions() const { return descriptions_; }
  std::size_t size() const { return descriptions_.size(); }
  const EntityDescription& at(EntityIndex i) const { return descriptions_[i]; }

  std::optional<EntityIndex> indexOf(std::string_view id) const;
  // Position of the description's source tag in sources().
  int sourceIndexOf(EntityIndex i) const { return sourceIndex_[i]; }
  std::size_t sourceSize(int source) const { return sourceSizes_[source]; }

  std::unordered_set<std::string> idSet() const;

 private:
  std::vector<EntityDescription> descriptions_;
  CollectionMode mode_;
  std::vector<std::string> sources_;
  std::vector<int> sourceIndex_;
  std::vector<std::size_t> sourceSizes_;
  std::unordered_map<std::string_view, EntityIndex> byId_;
};

enum class BlockKeyNamespace { token, clustered_token, infix };

std::string_view to_string(BlockKeyNamespace ns);

struct BlockKey {
  BlockKeyNamespace ns = BlockKeyNamespace::token;
  // Present iff ns == clustered_token.
  std::optional<std::uint32_t> clusterId;
  std::string term;

  friend bool operator==(const BlockKey&, const BlockKey&) = default;
  friend auto operator<=>(const BlockKey&, const BlockKey&) = default;
};

struct Block {
  BlockKey key;
  std::vector<EntityIndex> members;  // sorted, unique, non-empty
  // Clean-clean blocks whose members all come from one source carry no
  // comparisons; they stay in the collection for coverage accounting only.
  bool comparable = true;
};

// Def.-style blocking collection over a shared universe.  `unblocked` is
// derived: every universe id that appears in no block.
class BlockingCollection {
 public:
  BlockingCollection(std::shared_ptr<const EntityCollection> universe,
                     std::vector<Block> blocks);

  const EntityCollection& universe() const { return *universe_; }
  std::shared_ptr<const EntityCollection> universePtr() const { return universe_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<EntityIndex>& unblocked() const { return unblocked_; }

  std::size_t blockCount() const { return blocks_.size(); }
  std::size_t comparableBlockCount() const;
  std::size_t blockCountFor(BlockKeyNamespace ns) const;

  // Every universe id is either in some block or in `unblocked`.
  bool checkCoverage() const;

 private:
  std::shared_ptr<const EntityCollection> universe_;
  std::vector<Block> blocks_;
  std::vector<EntityIndex> unblocked_;
};

// Unordered identifier pair, stored canonically (first < second).
using IdPair = std::pair<std::string, std::string>;

IdPair make_id_pair(std::string a, std::string b);

// All C(k,2) pairs within each connected component of the pair graph.
std::vector<IdPair> transitive_closure(const std::vector<IdPair>& pairs);

// Transitively closed set of matching id pairs for one link predicate.
class GroundTruth {
 public:
  GroundTruth() = default;
  // Canonicalizes, drops reflexive pairs and closes the input.
  GroundTruth(std::string predicate, std::vector<IdPair> rawPairs);

  const std::string& predicate() const { return predicate_; }
  const std::vector<IdPair>& pairs() const { return pairs_; }
  bool contains(std::string_view a, std::string_view b) const;
  bool mentions(std::string_view id) const;
  std::size_t size() const { return pairs_.size(); }

  GroundTruth restrictedTo(const std::unordered_set<std::string>& ids) const;

 private:
  std::string predicate_;
  std::vector<IdPair> pairs_;                 // sorted canonical pairs
  std::unordered_set<std::string> mentioned_;
};

}  // namespace erblock

#endif  // ERBLOCK_MODEL_HPP_
