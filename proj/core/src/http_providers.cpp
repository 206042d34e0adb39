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

#include "smart/http_providers.hpp"

#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "internal/parallel.hpp"
#include "smart/error.hpp"

namespace smart {
namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.origin = url;
  } else {
    out.origin = url.substr(0, path_start);
    out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

// One keep-alive connection to a provider, used by a single thread.
class Connection {
 public:
  explicit Connection(const ProviderEndpoint& endpoint)
      : endpoint_(endpoint), url_(parse_url(endpoint.base_url)), client_(url_.origin) {
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        endpoint.timeout - secs);
    client_.set_connection_timeout(secs.count(), usecs.count());
    client_.set_read_timeout(secs.count(), usecs.count());
    client_.set_write_timeout(secs.count(), usecs.count());
    client_.set_keep_alive(true);
    if (!endpoint.bearer_token.empty()) {
      client_.set_bearer_token_auth(endpoint.bearer_token);
    }
  }

  json post(const std::string& path, const json& body) {
    const std::string target = url_.prefix + path;
    const std::string payload = body.dump();
    std::string last_error;
    auto delay = endpoint_.backoff;
    for (std::size_t attempt = 0; attempt <= endpoint_.retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(delay);
        delay *= 2;
      }
      auto res = client_.Post(target, payload, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::kProviderUnavailable,
                    endpoint_.base_url + target + " answered HTTP " +
                        std::to_string(res->status));
      }
      try {
        return json::parse(res->body);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kProtocolViolation,
                    endpoint_.base_url + target + " returned malformed JSON: " + e.what());
      }
    }
    throw Error(ErrorCode::kProviderUnavailable,
                endpoint_.base_url + target + " unavailable after " +
                    std::to_string(endpoint_.retries + 1) + " attempts (" + last_error + ")");
  }

 private:
  const ProviderEndpoint& endpoint_;
  ParsedUrl url_;
  httplib::Client client_;
};

template <typename T, typename Fn>
T decode(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocolViolation, what + ": " + e.what());
  }
}

NliJudgment decode_judgment(const json& body) {
  return decode<NliJudgment>("/nli response", [&] {
    return NliJudgment{body.at("entailment").get<double>(), body.at("neutral").get<double>(),
                       body.at("contradiction").get<double>()};
  });
}

std::size_t chunk_count(std::size_t n, std::size_t batch) { return (n + batch - 1) / batch; }

}  // namespace

HttpEmbeddingClient::HttpEmbeddingClient(ProviderEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
}

std::vector<std::vector<double>> HttpEmbeddingClient::embed_raw(
    std::span<const std::string> texts) const {
  const std::size_t batch = endpoint_.batch_size;
  const std::size_t chunks = chunk_count(texts.size(), batch);
  std::vector<std::vector<double>> out(texts.size());
  detail::parallel_for(chunks, endpoint_.max_in_flight, [&](std::size_t c) {
    const std::size_t begin = c * batch;
    const std::size_t end = std::min(texts.size(), begin + batch);
    json body = {{"texts", json::array()}};
    for (std::size_t i = begin; i < end; ++i) body["texts"].push_back(texts[i]);
    Connection conn(endpoint_);
    const json res = conn.post("/embed", body);
    auto vectors = decode<std::vector<std::vector<double>>>(
        "/embed response", [&] { return res.at("vectors").get<std::vector<std::vector<double>>>(); });
    if (vectors.size() != end - begin) {
      throw Error(ErrorCode::kProtocolViolation,
                  "/embed returned " + std::to_string(vectors.size()) + " vectors for " +
                      std::to_string(end - begin) + " texts");
    }
    for (std::size_t i = begin; i < end; ++i) out[i] = std::move(vectors[i - begin]);
  });
  return out;
}

HttpNliClient::HttpNliClient(ProviderEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
}

NliJudgment HttpNliClient::judge_raw(const std::string& premise,
                                     const std::string& hypothesis) const {
  Connection conn(endpoint_);
  return decode_judgment(
      conn.post("/nli", json{{"premise", premise}, {"hypothesis", hypothesis}}));
}

std::vector<NliJudgment> HttpNliClient::judge_many_raw(
    std::span<const NliPair> pairs) const {
  const std::size_t batch = endpoint_.batch_size;
  std::vector<NliJudgment> out(pairs.size());
  detail::parallel_for(chunk_count(pairs.size(), batch), endpoint_.max_in_flight,
                       [&](std::size_t c) {
                         Connection conn(endpoint_);
                         const std::size_t begin = c * batch;
                         const std::size_t end = std::min(pairs.size(), begin + batch);
                         for (std::size_t i = begin; i < end; ++i) {
                           out[i] = decode_judgment(conn.post(
                               "/nli", json{{"premise", pairs[i].premise},
                                            {"hypothesis", pairs[i].hypothesis}}));
                         }
                       });
  return out;
}

HttpRetrieverClient::HttpRetrieverClient(ProviderEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
}

std::vector<RetrievedDocument> HttpRetrieverClient::retrieve_raw(const std::string& query,
                                                                 std::size_t top_n) const {
  Connection conn(endpoint_);
  const json res = conn.post("/retrieve", json{{"query", query}, {"top_n", top_n}});
  return decode<std::vector<RetrievedDocument>>("/retrieve response", [&] {
    std::vector<RetrievedDocument> hits;
    for (const auto& h : res.at("hits")) {
      hits.push_back({h.at("id").get<std::string>(), h.at("text").get<std::string>(),
                      h.at("score").get<double>()});
    }
    return hits;
  });
}

}  // namespace smart
