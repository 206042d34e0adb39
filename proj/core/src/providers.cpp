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

#include "smart/providers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "smart/error.hpp"
#include "smart/http_providers.hpp"
#include "smart/mock_providers.hpp"

namespace smart {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string trim_copy(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

void ProviderEndpoint::validate() const {
  if (base_url.empty()) {
    throw Error(ErrorCode::kInvalidInput, "provider endpoint needs a base_url");
  }
  if (timeout.count() <= 0) {
    throw Error(ErrorCode::kInvalidInput, "provider timeout must be > 0");
  }
  if (max_in_flight < 1) {
    throw Error(ErrorCode::kInvalidInput, "max_in_flight must be >= 1");
  }
  if (batch_size < 1) {
    throw Error(ErrorCode::kInvalidInput, "batch_size must be >= 1");
  }
}

void NliJudgment::validate() const {
  if (!probability(entailment) || !probability(neutral) || !probability(contradiction)) {
    throw Error(ErrorCode::kProtocolViolation, "NLI probabilities must lie in [0, 1]");
  }
  const double sum = entailment + neutral + contradiction;
  if (std::abs(sum - 1.0) > 1e-3) {
    throw Error(ErrorCode::kProtocolViolation,
                "NLI probabilities sum to " + std::to_string(sum));
  }
}

std::vector<Embedding> EmbeddingProvider::embed_batch(
    std::span<const std::string> texts) const {
  if (texts.empty()) {
    throw Error(ErrorCode::kInvalidInput, "embed_batch needs at least one text");
  }
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (trim_copy(texts[i]).empty()) {
      throw Error(ErrorCode::kInvalidInput,
                  "text " + std::to_string(i) + " is empty after trimming", {i});
    }
  }
  auto raw = embed_raw(texts);
  if (raw.size() != texts.size()) {
    throw Error(ErrorCode::kProtocolViolation,
                "provider returned " + std::to_string(raw.size()) + " vectors for " +
                    std::to_string(texts.size()) + " texts");
  }
  std::vector<Embedding> out;
  out.reserve(raw.size());
  const std::size_t dim = raw.front().size();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].size() != dim || dim == 0) {
      throw Error(ErrorCode::kProtocolViolation,
                  "vector " + std::to_string(i) + " has dim " +
                      std::to_string(raw[i].size()) + ", batch dim is " +
                      std::to_string(dim),
                  {i});
    }
    try {
      out.push_back(Embedding(std::move(raw[i])).normalized());
    } catch (const Error& e) {
      throw Error(ErrorCode::kProtocolViolation,
                  "vector " + std::to_string(i) + ": " + e.what(), {i});
    }
  }
  return out;
}

NliJudgment NliProvider::nli_directional(const std::string& premise,
                                         const std::string& hypothesis) const {
  if (trim_copy(premise).empty() || trim_copy(hypothesis).empty()) {
    throw Error(ErrorCode::kInvalidInput, "premise and hypothesis must be non-empty");
  }
  NliJudgment j = judge_raw(premise, hypothesis);
  j.validate();
  return j;
}

std::vector<NliJudgment> NliProvider::nli_batch(std::span<const NliPair> pairs) const {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (trim_copy(pairs[i].premise).empty() || trim_copy(pairs[i].hypothesis).empty()) {
      throw Error(ErrorCode::kInvalidInput,
                  "pair " + std::to_string(i) + " has an empty side", {i});
    }
  }
  auto judgments = judge_many_raw(pairs);
  if (judgments.size() != pairs.size()) {
    throw Error(ErrorCode::kProtocolViolation, "NLI batch size mismatch");
  }
  for (const auto& j : judgments) j.validate();
  return judgments;
}

std::vector<NliJudgment> NliProvider::judge_many_raw(
    std::span<const NliPair> pairs) const {
  std::vector<NliJudgment> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(judge_raw(p.premise, p.hypothesis));
  return out;
}

std::vector<RetrievedDocument> Retriever::retrieve(const std::string& query,
                                                   std::size_t top_n) const {
  if (top_n < 1) throw Error(ErrorCode::kInvalidInput, "top_n must be >= 1");
  auto docs = retrieve_raw(query, top_n);
  for (const auto& d : docs) {
    if (!std::isfinite(d.score)) {
      throw Error(ErrorCode::kProtocolViolation, "retrieval score is not finite");
    }
  }
  std::stable_sort(docs.begin(), docs.end(),
                   [](const auto& a, const auto& b) { return a.score > b.score; });
  if (docs.size() > top_n) docs.resize(top_n);
  return docs;
}

NliJudgment CountingNliProvider::judge_raw(const std::string& premise,
                                           const std::string& hypothesis) const {
  calls_.fetch_add(1);
  return inner_->nli_directional(premise, hypothesis);
}

std::vector<NliJudgment> CountingNliProvider::judge_many_raw(
    std::span<const NliPair> pairs) const {
  calls_.fetch_add(pairs.size());
  return inner_->nli_batch(pairs);
}

void apply_env_overrides(ProviderSettings& settings, const EnvLookup& lookup) {
  const auto override_url = [&](std::optional<ProviderEndpoint>& ep, const char* var) {
    if (auto value = lookup(var); value && !value->empty()) {
      if (!ep) ep.emplace();
      ep->base_url = *value;
    }
  };
  override_url(settings.embed, "SMART_EMBED_URL");
  override_url(settings.nli, "SMART_NLI_URL");
  override_url(settings.retrieve, "SMART_RETRIEVE_URL");
}

void apply_env_overrides(ProviderSettings& settings) {
  apply_env_overrides(settings, [](const char* name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name)) return std::string(v);
    return std::nullopt;
  });
}

ProviderSet make_providers(const ProviderSettings& settings) {
  ProviderSet set;
  if (settings.embed) {
    set.embedder = std::make_shared<HttpEmbeddingClient>(*settings.embed);
  } else {
    set.embedder = std::make_shared<HashingEmbedder>(settings.mock.seed, settings.mock.dim);
  }
  if (settings.nli) {
    set.nli = std::make_shared<HttpNliClient>(*settings.nli);
  } else if (!settings.mock.nli_fixture.empty()) {
    set.nli = std::make_shared<FixtureNli>(FixtureNli::load(settings.mock.nli_fixture));
  } else {
    set.nli = std::make_shared<FixtureNli>();
  }
  if (settings.retrieve) {
    set.retriever = std::make_shared<HttpRetrieverClient>(*settings.retrieve);
  } else if (!settings.mock.corpus.empty()) {
    set.retriever =
        std::make_shared<FixtureRetriever>(FixtureRetriever::load(settings.mock.corpus));
  }
  return set;
}

}  // namespace smart
