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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "erblock/errors.hpp"
#include "erblock/ingest.hpp"
#include "helpers.hpp"

using namespace erblock;

namespace {

const char* kLandmarksNt = R"(<http://ex.org/e1> <http://ex.org/about> "Eiffel Tower" .
<http://ex.org/e1> <http://ex.org/architect> "Sauvestre" .
<http://ex.org/e1> <http://ex.org/year> "1889" .
<http://ex.org/e1> <http://ex.org/located> "Paris" .
<http://ex.org/e2> <http://ex.org/about> "Statue of Liberty" .
<http://ex.org/e2> <http://ex.org/architect> "Bartholdi Eiffel" .
<http://ex.org/e2> <http://ex.org/year> "1886" .
<http://ex.org/e2> <http://ex.org/located> "NY" .
<http://ex.org/e3> <http://ex.org/about> "Auguste Bartholdi" .
<http://ex.org/e3> <http://ex.org/born> "1834" .
<http://ex.org/e3> <http://ex.org/work> "Paris" .
<http://ex.org/e4> <http://ex.org/about> "Joan Tower" .
<http://ex.org/e4> <http://ex.org/born> "1938" .
<http://ex.org/e5> <http://ex.org/work> "Lady Liberty" .
<http://ex.org/e5> <http://ex.org/artist> "Bartholdi" .
<http://ex.org/e5> <http://ex.org/location> "NY" .
<http://ex.org/e6> <http://ex.org/work> "Eiffel Tower" .
<http://ex.org/e6> <http://ex.org/year-constructed> "1889" .
<http://ex.org/e6> <http://ex.org/location> "Paris" .
<http://ex.org/e7> <http://ex.org/work> "Bartholdi Fountain" .
<http://ex.org/e7> <http://ex.org/year-constructed> "1876" .
<http://ex.org/e7> <http://ex.org/location> "Washington" .
)";

}  // namespace

TEST_CASE("well-formed lines map straight onto triples") {
  const auto triples =
      parse_ntriples("<http://a> <http://p> \"Eiffel Tower\" .",
                     ParsePolicy::strict);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].subject == Term{TermKind::uri, "http://a"});
  CHECK(triples[0].predicate == "http://p");
  CHECK(triples[0].object == Term{TermKind::literal, "Eiffel Tower"});
}

TEST_CASE("blank nodes are marked on both positions") {
  const auto triples =
      parse_ntriples("_:b1 <http://p> <http://a> .", ParsePolicy::strict);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].subject.kind == TermKind::blank);
  CHECK(triples[0].subject.text == "b1");
  CHECK(triples[0].object == Term{TermKind::uri, "http://a"});

  const auto objectBlank =
      parse_ntriples("<http://a> <http://p> _:b2 .", ParsePolicy::strict);
  CHECK(objectBlank[0].object.kind == TermKind::blank);
}

TEST_CASE("empty streams parse to nothing") {
  CHECK(parse_ntriples("", ParsePolicy::strict).empty());
}

TEST_CASE("language tags and datatypes strip to the lexical form") {
  const auto triples = parse_ntriples(
      "<http://a> <http://p> \"tour\"@fr .\n"
      "<http://a> <http://q> "
      "\"5\"^^<http://www.w3.org/2001/XMLSchema#integer> .",
      ParsePolicy::strict);
  REQUIRE(triples.size() == 2);
  CHECK(triples[0].object == Term{TermKind::literal, "tour"});
  CHECK(triples[1].object == Term{TermKind::literal, "5"});
}

TEST_CASE("escape sequences decode") {
  const auto triples = parse_ntriples(
      R"(<http://a> <http://p> "a\"b\\c\ndA" .)", ParsePolicy::strict);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].object.text == "a\"b\\c\ndA");
}

TEST_CASE("comments and blank lines are skipped") {
  const auto triples = parse_ntriples(
      "# a comment\n\n<http://a> <http://p> <http://b> . # trailing\n",
      ParsePolicy::strict);
  CHECK(triples.size() == 1);
}

TEST_CASE("lenient parsing counts malformed lines, strict names them") {
  const std::string text =
      "<http://a> <http://p> <http://b> .\n"
      "this is not a triple\n"
      "<http://c> <http://p> <http://d> .\n";
  ParseStats stats;
  const auto triples = parse_ntriples(text, ParsePolicy::lenient, &stats);
  CHECK(triples.size() == 2);
  CHECK(stats.malformed == 1);
  CHECK(stats.triples == 2);

  try {
    parse_ntriples(text, ParsePolicy::strict);
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("descriptions group triples by subject") {
  const auto triples = parse_ntriples(
      "<http://s> <http://p1> \"a\" .\n"
      "<http://s> <http://p2> \"b\" .\n"
      "<http://s> <http://p3> <http://o> .\n",
      ParsePolicy::strict);
  const auto descriptions = build_descriptions(triples, "A");
  REQUIRE(descriptions.size() == 1);
  CHECK(descriptions[0].id == "http://s");
  CHECK(descriptions[0].pairs.size() == 3);
}

TEST_CASE("triples containing a blank node are removed") {
  const auto triples = parse_ntriples(
      "<http://s> <http://p> \"kept\" .\n"
      "<http://s> <http://p> _:b .\n"
      "_:c <http://p> \"dropped with its subject\" .\n",
      ParsePolicy::strict);
  const auto descriptions = build_descriptions(triples, "A");
  REQUIRE(descriptions.size() == 1);
  CHECK(descriptions[0].pairs.size() == 1);
  CHECK(descriptions[0].pairs[0].value.text == "kept");
}

TEST_CASE("duplicate triples collapse to one pair") {
  const auto triples = parse_ntriples(
      "<http://s> <http://p> \"a\" .\n<http://s> <http://p> \"a\" .\n",
      ParsePolicy::strict);
  const auto descriptions = build_descriptions(triples, "A");
  CHECK(descriptions[0].pairs.size() == 1);
}

TEST_CASE("the landmark triples yield the seven fixture descriptions") {
  const auto triples = parse_ntriples(kLandmarksNt, ParsePolicy::strict);
  const auto descriptions = build_descriptions(triples, "D");
  REQUIRE(descriptions.size() == 7);

  // Same pairs as the in-memory fixture, modulo the URI-shaped ids.
  auto fixture = erblock_test::landmarkDescriptions(false);
  for (auto& raw : fixture) raw.canonicalize();
  for (const auto& expected : fixture) {
    const auto it = std::find_if(
        descriptions.begin(), descriptions.end(), [&](const EntityDescription& d) {
          return d.id == "http://ex.org/" + expected.id;
        });
    REQUIRE(it != descriptions.end());
    REQUIRE(it->pairs.size() == expected.pairs.size());
    for (std::size_t i = 0; i < expected.pairs.size(); ++i) {
      CHECK(it->pairs[i].attribute ==
            "http://ex.org/" + expected.pairs[i].attribute);
      CHECK(it->pairs[i].value == expected.pairs[i].value);
    }
  }
}

TEST_CASE("description building is order-insensitive") {
  auto triples = parse_ntriples(kLandmarksNt, ParsePolicy::strict);
  const auto baseline = build_descriptions(triples, "D");
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(triples.begin(), triples.end(), rng);
    CHECK(build_descriptions(triples, "D") == baseline);
  }
}

TEST_CASE("ground truths close the matching pairs") {
  const auto triples = parse_ntriples(
      "<http://a> <http://www.w3.org/2002/07/owl#sameAs> <http://b> .\n"
      "<http://b> <http://www.w3.org/2002/07/owl#sameAs> <http://c> .\n"
      "<http://a> <http://other> <http://z> .\n",
      ParsePolicy::strict);
  const auto gt =
      load_ground_truth(triples, "http://www.w3.org/2002/07/owl#sameAs");
  CHECK(gt.size() == 3);
  CHECK(gt.contains("http://a", "http://c"));
}

TEST_CASE("link predicates other than sameAs work the same way") {
  // Possible-equivalence links over an airports-style fixture: the pair
  // count equals the link count when no chains merge.
  std::string text;
  for (int i = 0; i < 12; ++i) {
    text += "<http://kb.org/airport" + std::to_string(i) +
            "> <http://umbel.org/isLike> <http://dbpedia.org/A" +
            std::to_string(i) + "> .\n";
  }
  const auto triples = parse_ntriples(text, ParsePolicy::strict);
  const auto gt = load_ground_truth(triples, "http://umbel.org/isLike");
  CHECK(gt.size() == 12);
  CHECK(gt.predicate() == "http://umbel.org/isLike");
}

TEST_CASE("a predicate with no matching triples warns and yields nothing") {
  const auto triples =
      parse_ntriples("<http://a> <http://p> <http://b> .", ParsePolicy::strict);
  std::uint64_t warnings = 0;
  const auto gt = load_ground_truth(triples, "http://absent", nullptr, &warnings);
  CHECK(gt.size() == 0);
  CHECK(warnings == 1);
}

TEST_CASE("restriction keeps only pairs inside the given id sets") {
  const auto triples = parse_ntriples(
      "<http://a> <http://p> <http://b> .\n<http://c> <http://p> <http://d> .\n",
      ParsePolicy::strict);
  RestrictTo restrict{{"http://a"}, {"http://b"}};
  const auto gt = load_ground_truth(triples, "http://p", &restrict);
  CHECK(gt.size() == 1);
  CHECK(gt.contains("http://a", "http://b"));
}

TEST_CASE("tsv ground truths load and close") {
  std::istringstream in("a\tb\nb\tc\n");
  const auto gt = load_ground_truth_tsv(in);
  CHECK(gt.size() == 3);

  std::istringstream bad("only-one-column\n");
  CHECK_THROWS_AS(load_ground_truth_tsv(bad), DataError);
}

TEST_CASE("filtering to the ground truth") {
  auto collection = erblock_test::landmarksDirty();

  SUBCASE("an empty ground truth empties the collection") {
    const GroundTruth gt("p", {});
    CHECK(filter_to_ground_truth(*collection, gt).size() == 0);
  }

  SUBCASE("only mentioned descriptions survive") {
    const GroundTruth gt("p", {{"e1", "e6"}});
    const auto filtered = filter_to_ground_truth(*collection, gt);
    CHECK(filtered.size() == 2);
    CHECK(filtered.indexOf("e1").has_value());
    CHECK(filtered.indexOf("e6").has_value());
  }

  SUBCASE("pairs that encode a ground-truth link are removed") {
    std::vector<EntityDescription> ds{
        erblock_test::desc("a", "A", {{"name", "x"}},
                           {{"http://www.w3.org/2002/07/owl#sameAs", "b"}}),
        erblock_test::desc("b", "A", {{"name", "y"}}),
    };
    const EntityCollection withLink(std::move(ds), CollectionMode::dirty, {"A"});
    const GroundTruth gt("p", {{"a", "b"}});
    const auto filtered = filter_to_ground_truth(withLink, gt);
    const auto a = filtered.indexOf("a");
    REQUIRE(a.has_value());
    CHECK(filtered.at(*a).pairs.size() == 1);
    CHECK(filtered.at(*a).pairs[0].attribute == "name");
  }
}

TEST_CASE("description files round-trip byte for byte") {
  const auto descriptions = erblock_test::landmarkDescriptions(true);
  std::ostringstream first;
  write_descriptions_jsonl(first, descriptions);

  std::istringstream in(first.str());
  const auto reread = read_descriptions_jsonl(in);
  std::ostringstream second;
  write_descriptions_jsonl(second, reread);
  CHECK(first.str() == second.str());
  CHECK(reread == descriptions);
}

TEST_CASE("gzip-compressed inputs parse like plain ones") {
  const std::string path = "/tmp/erblock_test_input.nt.gz";
  gzFile gz = gzopen(path.c_str(), "wb");
  REQUIRE(gz != nullptr);
  gzwrite(gz, kLandmarksNt, static_cast<unsigned>(std::strlen(kLandmarksNt)));
  gzclose(gz);

  ParseStats stats;
  const auto triples = parse_ntriples_file(path, ParsePolicy::strict, &stats);
  CHECK(stats.triples == 22);
  CHECK(triples == parse_ntriples(kLandmarksNt, ParsePolicy::strict));
  std::remove(path.c_str());
}

TEST_CASE("parallel file parsing equals sequential parsing") {
  const std::string path = "/tmp/erblock_test_input.nt";
  {
    std::ofstream out(path, std::ios::binary);
    for (int i = 0; i < 2000; ++i) {
      out << "<http://s" << i % 97 << "> <http://p> \"v" << i << "\" .\n";
    }
  }
  const std::string bytes = read_file_bytes(path);
  engine::EngineOptions options;
  options.workers = 8;
  ParseStats parallelStats;
  const auto parallel =
      parse_ntriples_file(path, ParsePolicy::strict, &parallelStats, options);
  ParseStats sequentialStats;
  const auto sequential =
      parse_ntriples(bytes, ParsePolicy::strict, &sequentialStats);
  CHECK(parallel == sequential);
  CHECK(parallelStats.triples == sequentialStats.triples);
  std::remove(path.c_str());
}
