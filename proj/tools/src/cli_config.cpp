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

#include "smart/cli_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "smart/task_io.hpp"

namespace smart::cli {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> known) {
  for (const auto& item : obj.items()) {
    bool found = false;
    for (const char* k : known) found = found || item.key() == k;
    if (!found) throw InputError(path + "." + item.key(), "unknown configuration key");
  }
}

const json& object_at(const json& parent, const char* key, const std::string& path) {
  const json& v = parent.at(key);
  if (!v.is_object()) throw InputError(path, "expected an object");
  return v;
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw InputError(path, "expected a number");
  return v.get<double>();
}

std::size_t get_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw InputError(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw InputError(path, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw InputError(path, "expected a string");
  return v.get<std::string>();
}

std::string resolve_path(const std::string& value, const std::filesystem::path& base) {
  if (value.empty()) return value;
  const std::filesystem::path p(value);
  return (p.is_absolute() || base.empty()) ? value : (base / p).lexically_normal().string();
}

void apply_endpoint(CliConfig& config, std::optional<ProviderEndpoint>& slot,
                    const std::string& name, const json& obj, const std::string& path) {
  reject_unknown(obj, path,
                 {"base_url", "timeout_ms", "max_in_flight", "retries", "backoff_ms",
                  "batch_size", "bearer_token_env"});
  ProviderEndpoint e = slot.value_or(ProviderEndpoint{});
  if (obj.contains("base_url")) e.base_url = get_string(obj["base_url"], path + ".base_url");
  if (obj.contains("timeout_ms")) {
    e.timeout = std::chrono::milliseconds(get_count(obj["timeout_ms"], path + ".timeout_ms"));
  }
  if (obj.contains("max_in_flight")) {
    e.max_in_flight = get_count(obj["max_in_flight"], path + ".max_in_flight");
  }
  if (obj.contains("retries")) e.retries = get_count(obj["retries"], path + ".retries");
  if (obj.contains("backoff_ms")) {
    e.backoff = std::chrono::milliseconds(get_count(obj["backoff_ms"], path + ".backoff_ms"));
  }
  if (obj.contains("batch_size")) {
    e.batch_size = get_count(obj["batch_size"], path + ".batch_size");
  }
  if (obj.contains("bearer_token_env")) {
    config.token_env[name] = get_string(obj["bearer_token_env"], path + ".bearer_token_env");
  }
  slot = e;
}

ordered endpoint_json(const CliConfig& config, const std::optional<ProviderEndpoint>& e,
                      const std::string& name) {
  if (!e) return ordered(nullptr);
  ordered doc{{"base_url", e->base_url},
              {"timeout_ms", e->timeout.count()},
              {"max_in_flight", e->max_in_flight},
              {"retries", e->retries},
              {"backoff_ms", e->backoff.count()},
              {"batch_size", e->batch_size}};
  if (auto it = config.token_env.find(name); it != config.token_env.end()) {
    doc["bearer_token_env"] = it->second;
  }
  return doc;
}

}  // namespace

void apply_config_text(CliConfig& config, const std::string& json_text,
                       const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError("$", std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("$", "expected a JSON object");
  reject_unknown(doc, "$", {"selection", "pipeline", "providers"});

  if (doc.contains("selection")) {
    const json& s = object_at(doc, "selection", "$.selection");
    reject_unknown(s, "$.selection", {"beta", "gamma", "k", "m", "tol_psd"});
    if (s.contains("beta")) config.selection.beta = get_number(s["beta"], "$.selection.beta");
    if (s.contains("gamma")) {
      config.selection.gamma = get_number(s["gamma"], "$.selection.gamma");
    }
    if (s.contains("k")) config.selection.k = get_count(s["k"], "$.selection.k");
    if (s.contains("m")) config.selection.m = get_count(s["m"], "$.selection.m");
    if (s.contains("tol_psd")) {
      config.selection.tol_psd = get_number(s["tol_psd"], "$.selection.tol_psd");
    }
  }

  if (doc.contains("pipeline")) {
    const json& p = object_at(doc, "pipeline", "$.pipeline");
    reject_unknown(p, "$.pipeline", {"order", "skip_conflict", "abbreviations"});
    if (p.contains("order")) {
      const std::string order = get_string(p["order"], "$.pipeline.order");
      if (order == "selection") {
        config.order = OutputOrder::kSelection;
      } else if (order == "relevance") {
        config.order = OutputOrder::kRelevance;
      } else {
        throw InputError("$.pipeline.order", "expected \"selection\" or \"relevance\"");
      }
    }
    if (p.contains("skip_conflict")) {
      config.skip_conflict = get_bool(p["skip_conflict"], "$.pipeline.skip_conflict");
    }
    if (p.contains("abbreviations")) {
      config.abbreviations_path =
          resolve_path(get_string(p["abbreviations"], "$.pipeline.abbreviations"), base_dir);
    }
  }

  if (doc.contains("providers")) {
    const json& p = object_at(doc, "providers", "$.providers");
    reject_unknown(p, "$.providers", {"embed", "nli", "retrieve", "mock"});
    auto endpoint = [&](const char* name, std::optional<ProviderEndpoint>& slot) {
      if (!p.contains(name)) return;
      const std::string path = std::string("$.providers.") + name;
      if (p[name].is_null()) {
        slot.reset();
        return;
      }
      apply_endpoint(config, slot, name, object_at(p, name, path), path);
    };
    endpoint("embed", config.providers.embed);
    endpoint("nli", config.providers.nli);
    endpoint("retrieve", config.providers.retrieve);
    if (p.contains("mock")) {
      const json& m = object_at(p, "mock", "$.providers.mock");
      reject_unknown(m, "$.providers.mock", {"seed", "dim", "nli_fixture", "corpus"});
      auto& mock = config.providers.mock;
      if (m.contains("seed")) {
        if (!m["seed"].is_number_unsigned()) {
          throw InputError("$.providers.mock.seed", "expected a non-negative integer");
        }
        mock.seed = m["seed"].get<std::uint64_t>();
      }
      if (m.contains("dim")) mock.dim = get_count(m["dim"], "$.providers.mock.dim");
      if (m.contains("nli_fixture")) {
        mock.nli_fixture =
            resolve_path(get_string(m["nli_fixture"], "$.providers.mock.nli_fixture"), base_dir);
      }
      if (m.contains("corpus")) {
        mock.corpus = resolve_path(get_string(m["corpus"], "$.providers.mock.corpus"), base_dir);
      }
    }
  }
}

void apply_config_file(CliConfig& config, const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot read config file " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  apply_config_text(config, text.str(), path.parent_path());
}

void resolve_tokens(CliConfig& config, const EnvLookup& lookup) {
  auto resolve = [&](const char* name, std::optional<ProviderEndpoint>& slot) {
    const auto it = config.token_env.find(name);
    if (!slot || it == config.token_env.end()) return;
    const auto value = lookup(it->second.c_str());
    if (!value) {
      throw Error(ErrorCode::kProviderUnavailable,
                  "environment variable " + it->second + " (bearer token for " + name +
                      ") is not set");
    }
    slot->bearer_token = *value;
  };
  resolve("embed", config.providers.embed);
  resolve("nli", config.providers.nli);
  resolve("retrieve", config.providers.retrieve);
}

std::string config_to_json(const CliConfig& config) {
  const auto& s = config.selection;
  const auto& mock = config.providers.mock;
  ordered doc;
  doc["selection"] = ordered{
      {"beta", s.beta}, {"gamma", s.gamma}, {"k", s.k}, {"m", s.m}, {"tol_psd", s.tol_psd}};
  doc["pipeline"] =
      ordered{{"order", config.order == OutputOrder::kRelevance ? "relevance" : "selection"},
              {"skip_conflict", config.skip_conflict},
              {"abbreviations", config.abbreviations_path}};
  doc["providers"] =
      ordered{{"embed", endpoint_json(config, config.providers.embed, "embed")},
              {"nli", endpoint_json(config, config.providers.nli, "nli")},
              {"retrieve", endpoint_json(config, config.providers.retrieve, "retrieve")},
              {"mock", ordered{{"seed", mock.seed},
                               {"dim", mock.dim},
                               {"nli_fixture", mock.nli_fixture},
                               {"corpus", mock.corpus}}}};
  return doc.dump(2);
}

}  // namespace smart::cli
