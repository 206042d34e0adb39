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

// Effective CLI configuration: built-in defaults, then a JSON config file,
// then command-line flags, each layer overriding the previous one.
//
// Config file shape (every key optional; unknown keys are rejected):
//
//   {
//     "selection": {"beta": 0.8, "gamma": 0.8, "k": 5, "m": 30, "tol_psd": 1e-8},
//     "pipeline":  {"order": "selection", "skip_conflict": false,
//                   "abbreviations": "abbrev.txt"},
//     "providers": {
//       "embed":    {"base_url": "http://host:8080", "timeout_ms": 30000,
//                    "max_in_flight": 4, "retries": 2, "backoff_ms": 100,
//                    "batch_size": 32, "bearer_token_env": "EMBED_TOKEN"},
//       "nli":      {...}, "retrieve": {...},
//       "mock":     {"seed": 20240501, "dim": 256,
//                    "nli_fixture": "nli.json", "corpus": "corpus.json"}
//     }
//   }
//
// Relative file paths resolve against the config file's directory.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "smart/pipeline.hpp"
#include "smart/providers.hpp"
#include "smart/selector.hpp"

namespace smart::cli {

struct CliConfig {
  SelectionConfig selection;
  ProviderSettings providers;
  OutputOrder order = OutputOrder::kSelection;
  bool skip_conflict = false;
  std::string abbreviations_path;  // empty = builtin table
  // Endpoint name ("embed", "nli", "retrieve") -> env var holding its token.
  std::map<std::string, std::string> token_env;
};

// Applies a config file on top of `config`. Throws InputError naming the
// offending field, or Error(Io) when the file cannot be read.
void apply_config_file(CliConfig& config, const std::filesystem::path& path);
void apply_config_text(CliConfig& config, const std::string& json_text,
                       const std::filesystem::path& base_dir);

// Resolves bearer tokens from the environment through `lookup`.
void resolve_tokens(CliConfig& config, const EnvLookup& lookup);

// The effective configuration in config-file form; feeding it back through
// apply_config_text() reproduces the same configuration.
std::string config_to_json(const CliConfig& config);

}  // namespace smart::cli
