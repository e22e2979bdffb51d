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

#include "erblock/tokenize.hpp"

#include <algorithm>
#include <cctype>

namespace erblock {

namespace {

inline char foldAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool isDelimiter(unsigned char c, const TokenizerConfig& config) {
  if (!config.delimiters.empty()) {
    return config.delimiters.find(static_cast<char>(c)) != std::string::npos;
  }
  if (c >= 0x80) return false;
  return std::isalnum(c) == 0;
}

std::string_view stripScheme(std::string_view text) {
  for (std::string_view scheme : {"http://", "https://"}) {
    if (text.size() >= scheme.size()) {
      bool match = true;
      for (std::size_t i = 0; i < scheme.size(); ++i) {
        if (foldAscii(text[i]) != scheme[i]) {
          match = false;
          break;
        }
      }
      if (match) return text.substr(scheme.size());
    }
  }
  return text;
}

inline bool isWhitespace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view text,
                                       const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && current.size() >= config.minTokenLength) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (char c : text) {
    if (isDelimiter(static_cast<unsigned char>(c), config)) {
      flush();
    } else {
      current.push_back(config.caseFold ? foldAscii(c) : c);
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> tokenize(const Value& value,
                                  const TokenizerConfig& config) {
  if (value.kind == ValueKind::resource) {
    if (!config.tokenizeResourceValues) return {};
    return tokenize_text(stripScheme(value.text), config);
  }
  return tokenize_text(value.text, config);
}

std::string normalize_for_trigrams(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pendingSpace = false;
  for (char c : text) {
    if (isWhitespace(static_cast<unsigned char>(c))) {
      pendingSpace = !out.empty();
      continue;
    }
    if (pendingSpace) {
      out.push_back(' ');
      pendingSpace = false;
    }
    out.push_back(foldAscii(c));
  }
  return out;
}

std::vector<std::string> trigrams(std::string_view text) {
  const std::string normalized = normalize_for_trigrams(text);
  if (normalized.empty()) return {};
  std::vector<std::string> grams;
  if (normalized.size() < 3) {
    grams.push_back(normalized);
    return grams;
  }
  grams.reserve(normalized.size() - 2);
  for (std::size_t i = 0; i + 3 <= normalized.size(); ++i) {
    grams.emplace_back(normalized.substr(i, 3));
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace erblock
