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

#include <random>

#include "erblock/uri.hpp"

using namespace erblock;

TEST_CASE("the personal-homepage population splits prefix, infix and suffix") {
  const std::vector<std::string> population{
      "http://liris.cnrs.fr/olivier.aubert/foaf.rdf#me",
      "http://liris.cnrs.fr/jane.doe/foaf.rdf#me",
      "http://liris.cnrs.fr/max.power/foaf.rdf#me",
  };
  const auto table = PrefixTable::learn(population);
  const auto d = table.decompose(population[0]);
  CHECK(d.prefix == "http://liris.cnrs.fr");
  CHECK(d.infix == "/olivier.aubert");
  REQUIRE(d.suffix.has_value());
  CHECK(*d.suffix == "/foaf.rdf#me");
  CHECK(d.reassemble() == population[0]);
}

TEST_CASE("a lone URI of its host still yields the host prefix") {
  const std::vector<std::string> population{
      "http://liris.cnrs.fr/olivier.aubert/foaf.rdf#me"};
  const auto table = PrefixTable::learn(population);
  const auto d = table.decompose(population[0]);
  CHECK(d.prefix == "http://liris.cnrs.fr");
  CHECK(d.infix == "/olivier.aubert");
  REQUIRE(d.suffix.has_value());
  CHECK(*d.suffix == "/foaf.rdf#me");
}

TEST_CASE("single-segment URIs keep everything after the host as infix") {
  const std::vector<std::string> population{"http://x.org/a"};
  const auto table = PrefixTable::learn(population);
  const auto d = table.decompose("http://x.org/a");
  CHECK(d.prefix == "http://x.org");
  CHECK(d.infix == "/a");
  CHECK_FALSE(d.suffix.has_value());

  // Brute force over every candidate split: the host is the only '/'
  // boundary, so no other decomposition is possible.
  const std::string uri = "http://x.org/a";
  int boundaries = 0;
  for (std::size_t i = uri.find("://") + 3; i < uri.size(); ++i) {
    if (uri[i] == '/') ++boundaries;
  }
  CHECK(boundaries == 1);
}

TEST_CASE("opaque identifiers fall back to a whole-string infix") {
  const std::vector<std::string> population{"12345", "urn:isbn:978"};
  const auto table = PrefixTable::learn(population);
  CHECK(table.decompose("12345").infix == "12345");
  CHECK(table.decompose("12345").prefix.empty());
  CHECK(table.decompose("urn:isbn:978").infix == "urn:isbn:978");
}

TEST_CASE("domain grouping keys on the token after the scheme") {
  CHECK(PrefixTable::second_token("http://dbpedia.org/resource/X") == "dbpedia");
  CHECK(PrefixTable::second_token("https://liris.cnrs.fr/x") == "liris");
  CHECK(PrefixTable::second_token("ftp://host/x") == "host");
  CHECK_FALSE(PrefixTable::second_token("12345").has_value());
  CHECK_FALSE(PrefixTable::second_token("://x").has_value());
  CHECK_FALSE(PrefixTable::second_token("http://").has_value());
}

TEST_CASE("prefixes prefer the boundary with the most distinct next segments") {
  // Many distinct resources under /resource, a single one under /page/x.
  std::vector<std::string> population;
  for (int i = 0; i < 8; ++i) {
    population.push_back("http://dbpedia.org/resource/R" + std::to_string(i));
  }
  population.push_back("http://dbpedia.org/resource/sub/leaf");
  const auto table = PrefixTable::learn(population);
  const auto d = table.decompose("http://dbpedia.org/resource/R1");
  CHECK(d.prefix == "http://dbpedia.org/resource");
  CHECK(d.infix == "/R1");
}

TEST_CASE("deep paths pick a suffix by distinct preceding segments") {
  std::vector<std::string> population;
  for (int person = 0; person < 5; ++person) {
    population.push_back("http://h.org/people/p" + std::to_string(person) +
                         "/card#me");
  }
  const auto table = PrefixTable::learn(population);
  const auto d = table.decompose(population[2]);
  CHECK(d.prefix == "http://h.org/people");
  CHECK(d.infix == "/p2");
  REQUIRE(d.suffix.has_value());
  CHECK(*d.suffix == "/card#me");
  CHECK(d.reassemble() == population[2]);
}

TEST_CASE("awkward shapes reassemble exactly") {
  const std::vector<std::string> population{
      "http://x.org",          "http://x.org/",           "http://x.org//a",
      "http://x.org/a/",       "http://x.org/a//b",       "http://x.org/#frag",
      "http://x.org/a#b/c",    "https://y.net/a/b/c/d/e", "http://x.org/a/b",
  };
  const auto table = PrefixTable::learn(population);
  for (const auto& uri : population) {
    const auto d = table.decompose(uri);
    CHECK(d.reassemble() == uri);
    CHECK_FALSE(d.infix.empty());
  }
}

TEST_CASE("random URI fuzzing always reassembles") {
  std::mt19937_64 rng(17);
  std::vector<std::string> population;
  const std::vector<std::string> hosts{"a.org", "b.net", "c.co.uk", "d"};
  const std::vector<std::string> segments{"p",  "page", "x9", "a.b",
                                          "q#f", "r-r",  "",   "%20"};
  for (int i = 0; i < 2000; ++i) {
    std::string uri;
    switch (rng() % 6) {
      case 0: uri = std::to_string(rng() % 100000); break;
      case 1: uri = "urn:x:" + std::to_string(rng() % 100); break;
      default: {
        uri = (rng() % 2 ? "http://" : "https://") + hosts[rng() % hosts.size()];
        const int depth = static_cast<int>(rng() % 5);
        for (int s = 0; s < depth; ++s) {
          uri += "/" + segments[rng() % segments.size()];
        }
        break;
      }
    }
    population.push_back(std::move(uri));
  }
  const auto table = PrefixTable::learn(population);
  for (const auto& uri : population) {
    const auto d = table.decompose(uri);
    CHECK(d.reassemble() == uri);
    CHECK_FALSE(d.infix.empty());
  }
}
