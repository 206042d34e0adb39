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

// Scoring services the pipeline depends on: sentence embeddings, directional
// NLI judgments and document retrieval. Each interface validates what crosses
// it, so concrete providers (HTTP clients, offline doubles) only implement the
// raw call.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smart/relmat.hpp"

namespace smart {

struct ProviderEndpoint {
  std::string base_url;
  std::chrono::milliseconds timeout{30'000};
  std::size_t max_in_flight = 4;
  std::size_t retries = 2;
  std::chrono::milliseconds backoff{100};  // doubles after every retry
  std::size_t batch_size = 32;
  std::string bearer_token;                // sent as "Authorization: Bearer ..."

  void validate() const;
};

struct NliJudgment {
  double entailment = 0.0;
  double neutral = 1.0;
  double contradiction = 0.0;

  // Throws ProtocolViolation unless each field is in [0, 1] and they sum to
  // 1 within 1e-3.
  void validate() const;
};

struct NliPair {
  std::string premise;
  std::string hypothesis;
};

struct RetrievedDocument {
  std::string id;
  std::string text;
  double score = 0.0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  // One unit-norm embedding per text, in input order, uniform dimension.
  std::vector<Embedding> embed_batch(std::span<const std::string> texts) const;

 protected:
  virtual std::vector<std::vector<double>> embed_raw(
      std::span<const std::string> texts) const = 0;
};

class NliProvider {
 public:
  virtual ~NliProvider() = default;

  // P(premise -> hypothesis) is the returned contradiction probability.
  NliJudgment nli_directional(const std::string& premise,
                              const std::string& hypothesis) const;

  // Judgments for many pairs, matched to `pairs` by position.
  std::vector<NliJudgment> nli_batch(std::span<const NliPair> pairs) const;

 protected:
  virtual NliJudgment judge_raw(const std::string& premise,
                                const std::string& hypothesis) const = 0;
  // Default: judge_raw() in sequence.
  virtual std::vector<NliJudgment> judge_many_raw(std::span<const NliPair> pairs) const;
};

class Retriever {
 public:
  virtual ~Retriever() = default;

  // At most top_n documents by descending score; equal scores keep the
  // provider's order.
  std::vector<RetrievedDocument> retrieve(const std::string& query,
                                          std::size_t top_n) const;

 protected:
  virtual std::vector<RetrievedDocument> retrieve_raw(const std::string& query,
                                                      std::size_t top_n) const = 0;
};

// Counts every directional judgment that passes through it.
class CountingNliProvider final : public NliProvider {
 public:
  explicit CountingNliProvider(std::shared_ptr<const NliProvider> inner)
      : inner_(std::move(inner)) {}

  std::uint64_t calls() const noexcept { return calls_.load(); }
  void reset() noexcept { calls_.store(0); }

 protected:
  NliJudgment judge_raw(const std::string& premise,
                        const std::string& hypothesis) const override;
  std::vector<NliJudgment> judge_many_raw(std::span<const NliPair> pairs) const override;

 private:
  std::shared_ptr<const NliProvider> inner_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

struct ProviderSet {
  std::shared_ptr<const EmbeddingProvider> embedder;
  std::shared_ptr<const NliProvider> nli;
  std::shared_ptr<const Retriever> retriever;  // may be null
};

struct MockSettings {
  std::uint64_t seed = 20240501;
  std::size_t dim = 256;
  std::string nli_fixture;  // JSON fixture path; empty = no canned judgments
  std::string corpus;       // JSON corpus path for the retrieval double
};

// An endpoint that is present selects the HTTP client for that service;
// otherwise the offline double is used.
struct ProviderSettings {
  std::optional<ProviderEndpoint> embed;
  std::optional<ProviderEndpoint> nli;
  std::optional<ProviderEndpoint> retrieve;
  MockSettings mock;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

// SMART_EMBED_URL, SMART_NLI_URL and SMART_RETRIEVE_URL replace the matching
// endpoint's base_url (creating the endpoint if the config had none).
void apply_env_overrides(ProviderSettings& settings, const EnvLookup& lookup);
void apply_env_overrides(ProviderSettings& settings);

ProviderSet make_providers(const ProviderSettings& settings);

// Trims ASCII whitespace from both ends.
std::string trim_copy(std::string_view text);

}  // namespace smart
