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

#include "smart/mock_providers.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "smart/error.hpp"

namespace smart {
namespace {

using nlohmann::json;

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Lowercase ASCII and collapse whitespace runs, padded with one space on
// each side so short texts still produce n-grams.
std::string canonical_text(const std::string& text) {
  std::string out = " ";
  bool space = true;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!space) out.push_back(' ');
      space = true;
    } else {
      out.push_back(static_cast<char>(std::tolower(c)));
      space = false;
    }
  }
  if (!space) out.push_back(' ');
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, what + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> lexical_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

HashingEmbedder::HashingEmbedder(std::uint64_t seed, std::size_t dim, std::size_t ngram)
    : seed_(seed), dim_(dim), ngram_(ngram) {
  if (dim_ < 1 || ngram_ < 1) {
    throw Error(ErrorCode::kInvalidInput, "HashingEmbedder needs dim >= 1 and ngram >= 1");
  }
}

std::vector<double> HashingEmbedder::embed_one(const std::string& text) const {
  const std::string canon = canonical_text(text);
  std::map<std::string, int> counts;
  if (canon.size() <= ngram_) {
    ++counts[canon];
  } else {
    for (std::size_t i = 0; i + ngram_ <= canon.size(); ++i) {
      ++counts[canon.substr(i, ngram_)];
    }
  }
  std::uint64_t seed_state = seed_;
  const std::uint64_t seed_mix = splitmix64(seed_state);
  std::vector<double> v(dim_, 0.0);
  for (const auto& [gram, count] : counts) {
    std::uint64_t state = fnv1a(gram) ^ seed_mix;
    for (std::size_t d = 0; d < dim_; ++d) {
      const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
      v[d] += count * (2.0 * u - 1.0);
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::vector<std::vector<double>> HashingEmbedder::embed_raw(
    std::span<const std::string> texts) const {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

FixtureNli::FixtureNli(double default_contradiction)
    : default_contradiction_(default_contradiction) {
  if (!(default_contradiction >= 0.0 && default_contradiction <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability, "default_contradiction must be in [0, 1]");
  }
}

void FixtureNli::add(std::string premise, std::string hypothesis, NliJudgment judgment) {
  judgment.validate();
  table_[{std::move(premise), std::move(hypothesis)}] = judgment;
}

FixtureNli FixtureNli::parse(const std::string& json_text) {
  const json doc = parse_json(json_text, "NLI fixture");
  try {
    FixtureNli nli(doc.value("default_contradiction", 0.0));
    for (const auto& p : doc.value("pairs", json::array())) {
      NliJudgment j;
      j.contradiction = p.at("contradiction").get<double>();
      j.entailment = p.value("entailment", 0.0);
      j.neutral = p.value("neutral", 1.0 - j.contradiction - j.entailment);
      nli.add(p.at("premise").get<std::string>(), p.at("hypothesis").get<std::string>(), j);
    }
    return nli;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("NLI fixture: ") + e.what());
  }
}

FixtureNli FixtureNli::load(const std::string& path) { return parse(read_file(path)); }

NliJudgment FixtureNli::judge_raw(const std::string& premise,
                                  const std::string& hypothesis) const {
  if (auto it = table_.find({premise, hypothesis}); it != table_.end()) return it->second;
  if (premise == hypothesis) return NliJudgment{1.0, 0.0, 0.0};
  return NliJudgment{0.0, 1.0 - default_contradiction_, default_contradiction_};
}

FixtureRetriever::FixtureRetriever(std::vector<Document> corpus)
    : corpus_(std::move(corpus)) {}

FixtureRetriever FixtureRetriever::load(const std::string& path) {
  const json doc = parse_json(read_file(path), "retrieval corpus " + path);
  std::vector<Document> corpus;
  try {
    for (const auto& d : doc.at("documents")) {
      corpus.push_back({d.at("id").get<std::string>(), d.at("text").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, "retrieval corpus " + path + ": " + e.what());
  }
  return FixtureRetriever(std::move(corpus));
}

std::vector<RetrievedDocument> FixtureRetriever::retrieve_raw(const std::string& query,
                                                              std::size_t) const {
  const auto q_tokens = lexical_tokens(query);
  const std::set<std::string> q_set(q_tokens.begin(), q_tokens.end());
  std::vector<RetrievedDocument> hits;
  hits.reserve(corpus_.size());
  for (const auto& doc : corpus_) {
    const auto d_tokens = lexical_tokens(doc.text);
    const std::set<std::string> d_set(d_tokens.begin(), d_tokens.end());
    std::size_t shared = 0;
    for (const auto& t : q_set) shared += d_set.count(t);
    const double score =
        q_set.empty() ? 0.0 : static_cast<double>(shared) / static_cast<double>(q_set.size());
    hits.push_back({doc.id, doc.text, score});
  }
  return hits;
}

}  // namespace smart
