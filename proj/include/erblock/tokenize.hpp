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

#ifndef ERBLOCK_TOKENIZE_HPP_
#define ERBLOCK_TOKENIZE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erblock/model.hpp"

namespace erblock {

struct TokenizerConfig {
  // Empty means the default class: any non-alphanumeric ASCII byte splits;
  // bytes >= 0x80 are treated as token characters.
  std::string delimiters;
  bool caseFold = true;
  std::size_t minTokenLength = 1;
  // Whether resource-valued objects are tokenized (scheme-stripped) by the
  // token-based blocking methods.
  bool tokenizeResourceValues = true;
};

// Splits a value into tokens, in order of appearance, duplicates kept.
std::vector<std::string> tokenize(const Value& value,
                                  const TokenizerConfig& config);

std::vector<std::string> tokenize_text(std::string_view text,
                                       const TokenizerConfig& config);

// Case-folds and collapses whitespace runs to single spaces, trimming ends.
std::string normalize_for_trigrams(std::string_view text);

// Sorted, unique character 3-grams of the normalized text.  Normalized
// texts shorter than 3 characters yield {text} when non-empty.
std::vector<std::string> trigrams(std::string_view text);

// |a ∩ b| / |a ∪ b| over sorted unique ranges; 0 when both are empty.
double jaccard(std::span<const std::string> a, std::span<const std::string> b);

}  // namespace erblock

#endif  // ERBLOCK_TOKENIZE_HPP_
