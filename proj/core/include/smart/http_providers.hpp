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

// HTTP + JSON clients for model servers:
//
//   POST /embed    {"texts": [...]}                      -> {"vectors": [[...], ...]}
//   POST /nli      {"premise": ..., "hypothesis": ...}   -> {"entailment": x, "neutral": y,
//                                                            "contradiction": z}
//   POST /retrieve {"query": ..., "top_n": N}            -> {"hits": [{"id": ..., "text": ...,
//                                                                      "score": ...}]}
//
// Transport failures and 5xx responses are retried with exponential backoff;
// once retries are spent the call fails with ProviderUnavailable. Bodies that
// do not match the schema fail with ProtocolViolation.

#include "smart/providers.hpp"

namespace smart {

class HttpEmbeddingClient final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingClient(ProviderEndpoint endpoint);
  const ProviderEndpoint& endpoint() const noexcept { return endpoint_; }

 protected:
  // Texts go out in chunks of batch_size, up to max_in_flight at once.
  std::vector<std::vector<double>> embed_raw(
      std::span<const std::string> texts) const override;

 private:
  ProviderEndpoint endpoint_;
};

class HttpNliClient final : public NliProvider {
 public:
  explicit HttpNliClient(ProviderEndpoint endpoint);
  const ProviderEndpoint& endpoint() const noexcept { return endpoint_; }

 protected:
  NliJudgment judge_raw(const std::string& premise,
                        const std::string& hypothesis) const override;
  // Pairs are split into chunks of batch_size; each of at most max_in_flight
  // workers sends its chunk's requests over one connection.
  std::vector<NliJudgment> judge_many_raw(std::span<const NliPair> pairs) const override;

 private:
  ProviderEndpoint endpoint_;
};

class HttpRetrieverClient final : public Retriever {
 public:
  explicit HttpRetrieverClient(ProviderEndpoint endpoint);
  const ProviderEndpoint& endpoint() const noexcept { return endpoint_; }

 protected:
  std::vector<RetrievedDocument> retrieve_raw(const std::string& query,
                                              std::size_t top_n) const override;

 private:
  ProviderEndpoint endpoint_;
};

}  // namespace smart
