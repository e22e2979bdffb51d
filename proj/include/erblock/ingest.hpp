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
// RDF triple parsing and assembly of entity descriptions and ground truths.

#ifndef ERBLOCK_INGEST_HPP_
#define ERBLOCK_INGEST_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "erblock/engine.hpp"
#include "erblock/model.hpp"

namespace erblock {

enum class TermKind { uri, blank, literal };

struct Term {
  TermKind kind = TermKind::uri;
  std::string text;  // lexical form; language tags and datatypes stripped

  friend bool operator==(const Term&, const Term&) = default;
};

struct Triple {
  Term subject;            // uri or blank
  std::string predicate;   // always a uri
  Term object;             // uri, blank or literal

  friend bool operator==(const Triple&, const Triple&) = default;
};

enum class ParsePolicy { lenient, strict };

struct ParseStats {
  std::uint64_t lines = 0;
  std::uint64_t triples = 0;
  std::uint64_t malformed = 0;
};

// Line-oriented N-Triples text.  Malformed lines are counted and skipped
// under lenient policy; strict policy throws a DataError naming the line.
std::vector<Triple> parse_ntriples(std::string_view text, ParsePolicy policy,
                                   ParseStats* stats = nullptr);
std::vector<Triple> parse_ntriples(std::istream& in, ParsePolicy policy,
                                   ParseStats* stats = nullptr);

// Reads a file (gzip-decompressed when the name ends in .gz) and parses it,
// splitting the buffer at line boundaries across workers.
std::vector<Triple> parse_ntriples_file(const std::string& path,
                                        ParsePolicy policy,
                                        ParseStats* stats = nullptr,
                                        const engine::EngineOptions& = {});

std::string read_file_bytes(const std::string& path);

// One description per distinct non-blank subject; triples with a blank
// subject or object are dropped; duplicate (attribute, value) pairs collapse.
std::vector<EntityDescription> build_descriptions(
    const std::vector<Triple>& triples, const std::string& source,
    const engine::EngineOptions& = {});

struct RestrictTo {
  std::unordered_set<std::string> left;
  std::unordered_set<std::string> right;
};

// Collects (subject, object) pairs whose predicate matches and closes them
// transitively.  With restrict_to, keeps only pairs with both ends in the
// union of the two id sets.  `zeroMatchWarnings` is bumped when nothing
// matched the predicate.
GroundTruth load_ground_truth(const std::vector<Triple>& triples,
                              const std::string& predicate,
                              const RestrictTo* restrictTo = nullptr,
                              std::uint64_t* zeroMatchWarnings = nullptr);

// Two-column TSV of id pairs, closed transitively.
GroundTruth load_ground_truth_tsv(std::istream& in,
                                  const std::string& predicate = "tsv");

// Keeps only descriptions mentioned by the ground truth and removes from
// each the pairs that themselves encode a ground-truth link.
EntityCollection filter_to_ground_truth(const EntityCollection& collection,
                                        const GroundTruth& gt);

// Newline-delimited JSON, one record per description:
// {"id":..,"source":..,"pairs":[[attribute,value,kind]..]}.  Reading what
// was written and writing it again is byte-identical.
void write_descriptions_jsonl(std::ostream& out,
                              const std::vector<EntityDescription>& descriptions);
std::vector<EntityDescription> read_descriptions_jsonl(std::istream& in);

}  // namespace erblock

#endif  // ERBLOCK_INGEST_HPP_
