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

#include "erblock/uri.hpp"

#include <algorithm>

namespace erblock {

namespace {

// Positions of '/' at or after the end of the authority; each is a valid
// prefix cut (prefix = uri[0, pos), remainder starts with '/').
std::vector<std::size_t> prefixCuts(std::string_view uri) {
  const auto schemeEnd = uri.find("://");
  if (schemeEnd == std::string_view::npos) return {};
  std::vector<std::size_t> cuts;
  for (std::size_t pos = uri.find('/', schemeEnd + 3);
       pos != std::string_view::npos; pos = uri.find('/', pos + 1)) {
    cuts.push_back(pos);
  }
  return cuts;
}

// Segment starting right after the '/' at `cut`, up to the next '/' or end.
std::string_view segmentAfter(std::string_view uri, std::size_t cut) {
  const std::size_t start = cut + 1;
  const std::size_t next = uri.find('/', start);
  return uri.substr(start,
                    next == std::string_view::npos ? next : next - start);
}

// '/' positions strictly inside the remainder; each is a valid suffix cut
// (suffix = remainder[pos, end), preceded by a non-empty infix).
std::vector<std::size_t> suffixCuts(std::string_view remainder) {
  std::vector<std::size_t> cuts;
  for (std::size_t pos = remainder.find('/', 1);
       pos != std::string_view::npos; pos = remainder.find('/', pos + 1)) {
    cuts.push_back(pos);
  }
  return cuts;
}

// Segment between the previous '/' (or start) and the cut.
std::string_view segmentBefore(std::string_view remainder, std::size_t cut) {
  const std::size_t prev = remainder.rfind('/', cut - 1);
  const std::size_t start = prev == std::string_view::npos ? 0 : prev + 1;
  return remainder.substr(start, cut - start);
}

}  // namespace

std::optional<std::string> PrefixTable::second_token(std::string_view uri) {
  const auto schemeEnd = uri.find("://");
  if (schemeEnd == std::string_view::npos || schemeEnd == 0) return std::nullopt;
  std::string token;
  for (std::size_t i = schemeEnd + 3; i < uri.size(); ++i) {
    const char c = uri[i];
    if (c == '/' || c == ':' || c == '.' || c == '#') break;
    token.push_back(c);
  }
  if (token.empty()) return std::nullopt;
  return token;
}

PrefixTable PrefixTable::learn(const std::vector<std::string>& uris) {
  PrefixTable table;
  for (const auto& uri : uris) {
    const auto domain = second_token(uri);
    if (!domain) continue;
    auto& stats = table.groups_[*domain];
    for (std::size_t cut : prefixCuts(uri)) {
      stats.nextTokens[std::string(uri.substr(0, cut))].insert(
          std::string(segmentAfter(uri, cut)));
    }
  }
  // Second pass: commit each URI's prefix, then collect suffix statistics
  // over the remainders.
  for (const auto& uri : uris) {
    const auto domain = second_token(uri);
    if (!domain) continue;
    auto& stats = table.groups_[*domain];
    const std::size_t prefixEnd = table.choosePrefixEnd(stats, uri);
    if (prefixEnd == 0) continue;
    const std::string_view remainder =
        std::string_view(uri).substr(prefixEnd);
    for (std::size_t cut : suffixCuts(remainder)) {
      stats.prevSegments[std::string(remainder.substr(cut))].insert(
          std::string(segmentBefore(remainder, cut)));
    }
  }
  return table;
}

std::size_t PrefixTable::choosePrefixEnd(const GroupStats& stats,
                                         std::string_view uri) const {
  std::size_t best = 0;
  std::size_t bestCount = 0;
  for (std::size_t cut : prefixCuts(uri)) {
    auto it = stats.nextTokens.find(std::string(uri.substr(0, cut)));
    const std::size_t count = it == stats.nextTokens.end() ? 0 : it->second.size();
    // Largest distinct-next-token set wins; ties go to the shortest prefix.
    if (count > bestCount) {
      bestCount = count;
      best = cut;
    }
  }
  return best;
}

UriDecomposition PrefixTable::decompose(const std::string& uri) const {
  UriDecomposition whole{"", uri, std::nullopt};
  const auto domain = second_token(uri);
  if (!domain) return whole;
  const auto group = groups_.find(*domain);
  if (group == groups_.end()) return whole;

  const std::size_t prefixEnd = choosePrefixEnd(group->second, uri);
  if (prefixEnd == 0) return whole;

  const std::string_view remainder = std::string_view(uri).substr(prefixEnd);
  std::size_t suffixStart = remainder.size();  // no suffix
  std::size_t bestCount = 0;
  for (std::size_t cut : suffixCuts(remainder)) {
    auto it = group->second.prevSegments.find(std::string(remainder.substr(cut)));
    const std::size_t count =
        it == group->second.prevSegments.end() ? 0 : it->second.size();
    // Ties go to the shortest suffix, i.e. the latest cut.
    if (count > bestCount || (count == bestCount && count > 0)) {
      bestCount = count;
      suffixStart = cut;
    }
  }

  UriDecomposition out;
  out.prefix = uri.substr(0, prefixEnd);
  out.infix = std::string(remainder.substr(0, suffixStart));
  if (suffixStart < remainder.size()) {
    out.suffix = std::string(remainder.substr(suffixStart));
  }
  return out;
}

UriDecomposition decompose_uri(const std::string& uri,
                               const PrefixTable& table) {
  return table.decompose(uri);
}

}  // namespace erblock
