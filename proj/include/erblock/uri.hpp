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
// Prefix / infix / suffix decomposition of URIs.  URIs are grouped by
// their domain token; within a group, a URI's prefix is the '/'-aligned
// leading substring with the largest set of distinct immediately-following
// segments, and the suffix is found by the same rule applied from the right
// on what remains.  The infix is what is left between the two.

#ifndef ERBLOCK_URI_HPP_
#define ERBLOCK_URI_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace erblock {

struct UriDecomposition {
  std::string prefix;
  std::string infix;  // non-empty; whole URI when decomposition fails
  std::optional<std::string> suffix;

  std::string reassemble() const {
    return prefix + infix + (suffix ? *suffix : "");
  }
};

class PrefixTable {
 public:
  // Builds domain-grouped prefix and suffix statistics from the full URI
  // population the table will be asked to decompose.
  static PrefixTable learn(const std::vector<std::string>& uris);

  UriDecomposition decompose(const std::string& uri) const;

  // The first delimiter-separated token after "scheme://", e.g. "dbpedia"
  // for http://dbpedia.org/resource/X.  Empty result = not decomposable.
  static std::optional<std::string> second_token(std::string_view uri);

  std::size_t groupCount() const { return groups_.size(); }

 private:
  struct GroupStats {
    // candidate prefix -> distinct segments immediately after it
    std::unordered_map<std::string, std::unordered_set<std::string>> nextTokens;
    // candidate suffix -> distinct segments immediately before it
    std::unordered_map<std::string, std::unordered_set<std::string>> prevSegments;
  };

  // prefix length when prefix statistics decide one, else 0 (whole infix)
  std::size_t choosePrefixEnd(const GroupStats& stats,
                              std::string_view uri) const;

  std::unordered_map<std::string, GroupStats> groups_;
};

UriDecomposition decompose_uri(const std::string& uri, const PrefixTable& table);

}  // namespace erblock

#endif  // ERBLOCK_URI_HPP_
