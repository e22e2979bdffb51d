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

#include "erblock/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "erblock/errors.hpp"

namespace erblock {

namespace {

struct LineParser {
  std::string_view line;
  std::size_t pos = 0;

  bool atEnd() const { return pos >= line.size(); }
  char peek() const { return line[pos]; }

  void skipWhitespace() {
    while (!atEnd() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(what);
  }

  void appendUtf8(std::string& out, std::uint32_t cp) {
    if (cp <= 0x7f) {
      out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7ff) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0xffff) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
  }

  std::uint32_t hexEscape(std::size_t digits) {
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      if (atEnd()) fail("truncated \\u escape");
      const char c = line[pos++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<std::uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      else fail("bad hex digit in escape");
    }
    return cp;
  }

  // Unescapes N-Triples string escapes into out until `terminator`.
  std::string escapedUntil(char terminator, bool allowEscapes) {
    std::string out;
    while (true) {
      if (atEnd()) fail("unterminated term");
      char c = line[pos++];
      if (c == terminator) return out;
      if (c == '\\' && allowEscapes) {
        if (atEnd()) fail("dangling escape");
        const char e = line[pos++];
        switch (e) {
          case 't': out.push_back('\t'); break;
          case 'b': out.push_back('\b'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 'f': out.push_back('\f'); break;
          case '"': out.push_back('"'); break;
          case '\'': out.push_back('\''); break;
          case '\\': out.push_back('\\'); break;
          case 'u': appendUtf8(out, hexEscape(4)); break;
          case 'U': appendUtf8(out, hexEscape(8)); break;
          default: fail(std::string("unknown escape \\") + e);
        }
      } else {
        out.push_back(c);
      }
    }
  }

  std::string iri() {
    if (atEnd() || line[pos] != '<') fail("expected '<'");
    ++pos;
    std::string out = escapedUntil('>', true);
    if (out.empty()) fail("empty IRI");
    return out;
  }

  std::string blankLabel() {
    pos += 2;  // "_:"
    std::string out;
    while (!atEnd() && line[pos] != ' ' && line[pos] != '\t' &&
           line[pos] != '.') {
      out.push_back(line[pos++]);
    }
    if (out.empty()) fail("empty blank node label");
    return out;
  }

  Term subjectTerm() {
    skipWhitespace();
    if (atEnd()) fail("missing subject");
    if (peek() == '<') return Term{TermKind::uri, iri()};
    if (line.compare(pos, 2, "_:") == 0) return Term{TermKind::blank, blankLabel()};
    fail("subject must be an IRI or blank node");
  }

  Term objectTerm() {
    skipWhitespace();
    if (atEnd()) fail("missing object");
    if (peek() == '<') return Term{TermKind::uri, iri()};
    if (line.compare(pos, 2, "_:") == 0) return Term{TermKind::blank, blankLabel()};
    if (peek() == '"') {
      ++pos;
      std::string lexical = escapedUntil('"', true);
      // Strip language tag or datatype, keeping the lexical form.
      if (!atEnd() && peek() == '@') {
        ++pos;
        while (!atEnd() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                            peek() == '-')) {
          ++pos;
        }
      } else if (line.compare(pos, 2, "^^") == 0) {
        pos += 2;
        iri();
      }
      return Term{TermKind::literal, std::move(lexical)};
    }
    fail("object must be an IRI, blank node or literal");
  }

  std::optional<Triple> parse() {
    skipWhitespace();
    if (atEnd() || peek() == '#') return std::nullopt;  // blank or comment
    Triple t;
    t.subject = subjectTerm();
    skipWhitespace();
    t.predicate = iri();
    t.object = objectTerm();
    skipWhitespace();
    if (atEnd() || line[pos] != '.') fail("missing terminating '.'");
    ++pos;
    skipWhitespace();
    if (!atEnd() && peek() != '#') fail("trailing content after '.'");
    return t;
  }
};

void parseChunk(std::string_view chunk, std::uint64_t firstLineNumber,
                ParsePolicy policy, std::vector<Triple>& out,
                ParseStats& stats) {
  std::size_t start = 0;
  std::uint64_t lineNumber = firstLineNumber;
  while (start <= chunk.size()) {
    std::size_t end = chunk.find('\n', start);
    if (end == std::string_view::npos) {
      if (start == chunk.size()) break;
      end = chunk.size();
    }
    std::string_view line = chunk.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      ++stats.lines;
      LineParser parser{line};
      try {
        if (auto triple = parser.parse()) {
          out.push_back(std::move(*triple));
          ++stats.triples;
        }
      } catch (const DataError& e) {
        if (policy == ParsePolicy::strict) {
          throw DataError("line " + std::to_string(lineNumber) + ": " +
                          e.what());
        }
        ++stats.malformed;
      }
    }
    start = end + 1;
    ++lineNumber;
  }
}

}  // namespace

std::vector<Triple> parse_ntriples(std::string_view text, ParsePolicy policy,
                                   ParseStats* stats) {
  std::vector<Triple> out;
  ParseStats local;
  parseChunk(text, 1, policy, out, local);
  if (stats) *stats = local;
  return out;
}

std::vector<Triple> parse_ntriples(std::istream& in, ParsePolicy policy,
                                   ParseStats* stats) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  return parse_ntriples(text, policy, stats);
}

std::string read_file_bytes(const std::string& path) {
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw DataError("cannot open '" + path + "'");
    std::string out;
    char buffer[1 << 16];
    int got;
    while ((got = gzread(gz, buffer, sizeof(buffer))) > 0) {
      out.append(buffer, static_cast<std::size_t>(got));
    }
    const bool failed = got < 0;
    gzclose(gz);
    if (failed) throw DataError("gzip read error on '" + path + "'");
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Triple> parse_ntriples_file(const std::string& path,
                                        ParsePolicy policy, ParseStats* stats,
                                        const engine::EngineOptions& options) {
  const std::string bytes = read_file_bytes(path);
  const unsigned workers = engine::resolve_workers(options);

  // Byte-range partitions split at line boundaries.
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  const std::size_t target = std::max<std::size_t>(
      4096, bytes.size() / std::max<unsigned>(workers, 1) + 1);
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t end = std::min(bytes.size(), start + target);
    while (end < bytes.size() && bytes[end] != '\n') ++end;
    if (end < bytes.size()) ++end;
    ranges.emplace_back(start, end);
    start = end;
  }

  // Line numbers per range so strict errors stay exact.
  std::vector<std::uint64_t> firstLine(ranges.size(), 1);
  for (std::size_t r = 1; r < ranges.size(); ++r) {
    const auto [from, to] = ranges[r - 1];
    firstLine[r] =
        firstLine[r - 1] +
        static_cast<std::uint64_t>(
            std::count(bytes.begin() + static_cast<std::ptrdiff_t>(from),
                       bytes.begin() + static_cast<std::ptrdiff_t>(to), '\n'));
  }

  std::vector<std::vector<Triple>> perRange(ranges.size());
  std::vector<ParseStats> perStats(ranges.size());
  engine::parallel_for(ranges.size(), workers, [&](std::size_t r) {
    parseChunk(std::string_view(bytes).substr(ranges[r].first,
                                              ranges[r].second - ranges[r].first),
               firstLine[r], policy, perRange[r], perStats[r]);
  });

  std::vector<Triple> out;
  ParseStats total;
  for (std::size_t r = 0; r < ranges.size(); ++r) {
    total.lines += perStats[r].lines;
    total.triples += perStats[r].triples;
    total.malformed += perStats[r].malformed;
    out.insert(out.end(), std::make_move_iterator(perRange[r].begin()),
               std::make_move_iterator(perRange[r].end()));
  }
  if (stats) *stats = total;
  return out;
}

std::vector<EntityDescription> build_descriptions(
    const std::vector<Triple>& triples, const std::string& source,
    const engine::EngineOptions& options) {
  auto partitioned = engine::PartitionedDataset<Triple>::split(
      triples, engine::resolve_workers(options) * 4);

  auto mapFn = [](const Triple& t)
      -> std::vector<std::pair<std::string, AttributeValue>> {
    if (t.subject.kind != TermKind::uri || t.object.kind == TermKind::blank) {
      return {};
    }
    Value value{t.object.kind == TermKind::uri ? ValueKind::resource
                                               : ValueKind::literal,
                t.object.text};
    return {{t.subject.text, AttributeValue{t.predicate, std::move(value)}}};
  };
  auto reduceFn = [&source](const std::string& subject,
                            const std::vector<AttributeValue>& values)
      -> std::vector<EntityDescription> {
    EntityDescription d;
    d.id = subject;
    d.source = source;
    d.pairs = values;
    d.canonicalize();
    return {std::move(d)};
  };
  return engine::map_group_reduce(partitioned, mapFn, reduceFn, options);
}

GroundTruth load_ground_truth(const std::vector<Triple>& triples,
                              const std::string& predicate,
                              const RestrictTo* restrictTo,
                              std::uint64_t* zeroMatchWarnings) {
  if (predicate.empty()) throw ConfigError("ground-truth predicate is empty");
  std::vector<IdPair> raw;
  for (const auto& t : triples) {
    if (t.predicate != predicate) continue;
    if (t.subject.kind != TermKind::uri || t.object.kind != TermKind::uri) continue;
    if (t.subject.text == t.object.text) continue;
    raw.push_back(make_id_pair(t.subject.text, t.object.text));
  }
  if (raw.empty() && zeroMatchWarnings) ++*zeroMatchWarnings;
  GroundTruth gt(predicate, std::move(raw));
  if (restrictTo) {
    std::unordered_set<std::string> ids = restrictTo->left;
    ids.insert(restrictTo->right.begin(), restrictTo->right.end());
    return gt.restrictedTo(ids);
  }
  return gt;
}

GroundTruth load_ground_truth_tsv(std::istream& in,
                                  const std::string& predicate) {
  std::vector<IdPair> raw;
  std::string line;
  std::uint64_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw DataError("ground-truth TSV line " + std::to_string(lineNumber) +
                      ": expected two tab-separated ids");
    }
    std::string a = line.substr(0, tab);
    std::string b = line.substr(tab + 1);
    if (a == b) continue;
    raw.push_back(make_id_pair(std::move(a), std::move(b)));
  }
  return GroundTruth(predicate, std::move(raw));
}

EntityCollection filter_to_ground_truth(const EntityCollection& collection,
                                        const GroundTruth& gt) {
  std::vector<EntityDescription> kept;
  for (const auto& d : collection.descriptions()) {
    if (!gt.mentions(d.id)) continue;
    EntityDescription copy = d;
    copy.pairs.erase(
        std::remove_if(copy.pairs.begin(), copy.pairs.end(),
                       [&](const AttributeValue& p) {
                         return p.value.kind == ValueKind::resource &&
                                gt.contains(d.id, p.value.text);
                       }),
        copy.pairs.end());
    kept.push_back(std::move(copy));
  }
  return EntityCollection(std::move(kept), collection.mode(),
                          collection.sources());
}

void write_descriptions_jsonl(
    std::ostream& out, const std::vector<EntityDescription>& descriptions) {
  for (const auto& d : descriptions) {
    nlohmann::ordered_json record;
    record["id"] = d.id;
    record["source"] = d.source;
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& p : d.pairs) {
      pairs.push_back({p.attribute, p.value.text,
                       std::string(to_string(p.value.kind))});
    }
    record["pairs"] = std::move(pairs);
    out << record.dump() << '\n';
  }
}

std::vector<EntityDescription> read_descriptions_jsonl(std::istream& in) {
  std::vector<EntityDescription> out;
  std::string line;
  std::uint64_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("descriptions line " + std::to_string(lineNumber) +
                      ": " + e.what());
    }
    EntityDescription d;
    d.id = record.at("id").get<std::string>();
    d.source = record.at("source").get<std::string>();
    for (const auto& p : record.at("pairs")) {
      const std::string kind = p.at(2).get<std::string>();
      if (kind != "literal" && kind != "resource") {
        throw DataError("descriptions line " + std::to_string(lineNumber) +
                        ": unknown value kind '" + kind + "'");
      }
      d.pairs.push_back(AttributeValue{
          p.at(0).get<std::string>(),
          Value{kind == "literal" ? ValueKind::literal : ValueKind::resource,
                p.at(1).get<std::string>()}});
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace erblock
