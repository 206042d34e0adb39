// Copyright 2026 The smart Authors.
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

#pragma once

// Rule-based sentence splitting.
//
// A boundary is placed after '.', '!' or '?' (plus any closing quotes or
// brackets) when it is followed by whitespace and then an uppercase ASCII
// letter, a digit or an opening quote. A '.' that ends a listed abbreviation
// ("Dr.", "e.g.") never ends a sentence. Pieces are trimmed and pieces
// shorter than kMinSentenceLength characters are dropped.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smart/relmat.hpp"

namespace smart {

inline constexpr std::size_t kMinSentenceLength = 3;

class Abbreviations {
 public:
  // The table compiled in from data/abbreviations.txt.
  static const Abbreviations& builtin();

  // One lowercase entry per line without the trailing period; '#' comments.
  static Abbreviations parse(std::string_view text);
  static Abbreviations load(const std::string& path);

  // `token` is the word before the period, in any case, without the period.
  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::set<std::string, std::less<>> entries_;
};

struct ContextSentence {
  std::string sent_id;  // "<doc_id>:<ordinal>"
  std::string doc_id;
  std::size_t ordinal = 0;
  std::string text;
  std::optional<Embedding> embedding;
  double relevance = 0.0;
};

std::vector<ContextSentence> segment_sentences(
    const std::string& doc_id, const std::string& text,
    const Abbreviations& abbreviations = Abbreviations::builtin());

// Lowercased text with whitespace runs collapsed to one space and trimmed.
std::string dedup_key(std::string_view text);

// Keeps the first sentence for every dedup_key().
std::vector<ContextSentence> dedup_sentences(std::vector<ContextSentence> sentences);

}  // namespace smart
