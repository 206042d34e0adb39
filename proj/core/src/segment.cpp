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

#include "smart/segment.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "abbreviations_data.hpp"
#include "smart/error.hpp"
#include "smart/providers.hpp"

namespace smart {
namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Length of a closing quote/bracket at `pos`, or 0.
std::size_t closer_at(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  // U+201D and U+2019 (right double/single quotation marks).
  if (s.compare(pos, 3, "\xE2\x80\x9D") == 0 || s.compare(pos, 3, "\xE2\x80\x99") == 0) {
    return 3;
  }
  return 0;
}

bool opens_sentence(std::string_view s, std::size_t pos) {
  const auto c = static_cast<unsigned char>(s[pos]);
  if (std::isupper(c) || std::isdigit(c)) return true;
  if (c == '"' || c == '\'' || c == '(' || c == '[') return true;
  // U+201C and U+2018 (left double/single quotation marks).
  return s.compare(pos, 3, "\xE2\x80\x9C") == 0 || s.compare(pos, 3, "\xE2\x80\x98") == 0;
}

// The whitespace-delimited word ending just before the period at `dot`,
// without leading quotes or brackets.
std::string_view word_before(std::string_view s, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !is_space(static_cast<unsigned char>(s[b - 1]))) --b;
  while (b < dot && (s[b] == '"' || s[b] == '\'' || s[b] == '(' || s[b] == '[')) ++b;
  return s.substr(b, dot - b);
}

}  // namespace

const Abbreviations& Abbreviations::builtin() {
  static const Abbreviations table = parse(detail::kDefaultAbbreviations);
  return table;
}

Abbreviations Abbreviations::parse(std::string_view text) {
  Abbreviations out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    line = trim_copy(line);
    if (line.empty() || line.front() == '#') continue;
    for (auto& ch : line) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out.entries_.insert(line);
  }
  return out;
}

Abbreviations Abbreviations::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open abbreviation list " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Abbreviations::contains(std::string_view token) const {
  std::string lower(token);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return entries_.find(lower) != entries_.end();
}

std::vector<ContextSentence> segment_sentences(const std::string& doc_id,
                                               const std::string& text,
                                               const Abbreviations& abbreviations) {
  std::vector<ContextSentence> out;
  const std::string_view s(text);
  const auto emit = [&](std::size_t begin, std::size_t end) {
    std::string piece = trim_copy(s.substr(begin, end - begin));
    if (piece.size() < kMinSentenceLength) return;
    ContextSentence sent;
    sent.doc_id = doc_id;
    sent.ordinal = out.size();
    sent.sent_id = doc_id + ":" + std::to_string(sent.ordinal);
    sent.text = std::move(piece);
    out.push_back(std::move(sent));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_terminal(s[i])) {
      ++i;
      continue;
    }
    const std::size_t punct = i;
    std::size_t j = i + 1;
    while (j < s.size() && is_terminal(s[j])) ++j;
    while (j < s.size()) {
      const std::size_t len = closer_at(s, j);
      if (len == 0) break;
      j += len;
    }
    std::size_t k = j;
    while (k < s.size() && is_space(static_cast<unsigned char>(s[k]))) ++k;
    const bool boundary = k > j && k < s.size() && opens_sentence(s, k);
    const bool abbreviation =
        s[punct] == '.' && j == punct + 1 && abbreviations.contains(word_before(s, punct));
    if (boundary && !abbreviation) {
      emit(start, j);
      start = k;
    }
    i = j;
  }
  if (start < s.size()) emit(start, s.size());
  return out;
}

std::string dedup_key(std::string_view text) {
  std::string key;
  key.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (is_space(c)) {
      pending_space = !key.empty();
      continue;
    }
    if (pending_space) key.push_back(' ');
    pending_space = false;
    key.push_back(static_cast<char>(std::tolower(c)));
  }
  return key;
}

std::vector<ContextSentence> dedup_sentences(std::vector<ContextSentence> sentences) {
  std::unordered_set<std::string> seen;
  std::vector<ContextSentence> out;
  out.reserve(sentences.size());
  for (auto& s : sentences) {
    if (seen.insert(dedup_key(s.text)).second) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace smart
