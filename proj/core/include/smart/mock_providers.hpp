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

// Deterministic offline providers used by tests and by the CLI when no
// service URL is configured.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "smart/providers.hpp"

namespace smart {

// Seeded pseudo-random projection of character trigram counts. The same
// seed and text give the same vector in every process.
class HashingEmbedder final : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::uint64_t seed = 20240501, std::size_t dim = 256,
                           std::size_t ngram = 3);

  std::size_t dim() const noexcept { return dim_; }

 protected:
  std::vector<std::vector<double>> embed_raw(
      std::span<const std::string> texts) const override;

 private:
  std::vector<double> embed_one(const std::string& text) const;

  std::uint64_t seed_;
  std::size_t dim_;
  std::size_t ngram_;
};

// Canned judgments keyed on (premise, hypothesis). Identical sides judge as
// entailment; unknown pairs get `default_contradiction` with the rest of the
// mass on neutral.
class FixtureNli final : public NliProvider {
 public:
  FixtureNli() = default;
  explicit FixtureNli(double default_contradiction);

  void add(std::string premise, std::string hypothesis, NliJudgment judgment);
  std::size_t size() const noexcept { return table_.size(); }

  // {"default_contradiction": 0.0,
  //  "pairs": [{"premise": ..., "hypothesis": ..., "contradiction": ...,
  //             "entailment": ..., "neutral": ...}]}
  // entailment/neutral are optional; missing mass goes to neutral.
  static FixtureNli load(const std::string& path);
  static FixtureNli parse(const std::string& json_text);

 protected:
  NliJudgment judge_raw(const std::string& premise,
                        const std::string& hypothesis) const override;

 private:
  std::map<std::pair<std::string, std::string>, NliJudgment> table_;
  double default_contradiction_ = 0.0;
};

// Lexical retriever over a small in-memory corpus: score is the fraction of
// distinct lowercase query tokens that occur in the document.
class FixtureRetriever final : public Retriever {
 public:
  struct Document {
    std::string id;
    std::string text;
  };

  explicit FixtureRetriever(std::vector<Document> corpus);

  // {"documents": [{"id": ..., "text": ...}]}
  static FixtureRetriever load(const std::string& path);

  const std::vector<Document>& corpus() const noexcept { return corpus_; }

 protected:
  std::vector<RetrievedDocument> retrieve_raw(const std::string& query,
                                              std::size_t top_n) const override;

 private:
  std::vector<Document> corpus_;
};

// Lowercase alphanumeric tokens.
std::vector<std::string> lexical_tokens(const std::string& text);

}  // namespace smart
