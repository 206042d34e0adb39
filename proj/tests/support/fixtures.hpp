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

// Offline provider set and task list built from tests/fixtures.

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "smart/mock_providers.hpp"
#include "smart/pipeline.hpp"
#include "smart/task_io.hpp"

#ifndef SMART_FIXTURE_DIR
#error "SMART_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace smart::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(SMART_FIXTURE_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ProviderSet fixture_providers(std::shared_ptr<const NliProvider> nli = nullptr) {
  ProviderSet set;
  set.embedder = std::make_shared<HashingEmbedder>(20240501, 256);
  set.nli = nli ? std::move(nli)
                : std::make_shared<FixtureNli>(FixtureNli::load(fixture_path("nli.json")));
  set.retriever =
      std::make_shared<FixtureRetriever>(FixtureRetriever::load(fixture_path("corpus.json")));
  return set;
}

inline SelectionConfig fixture_selection() {
  SelectionConfig c;
  c.beta = 0.8;
  c.gamma = 0.8;
  c.k = 5;
  c.m = 30;
  return c;
}

inline std::vector<QueryTask> fixture_tasks() {
  std::ifstream in(fixture_path("tasks.jsonl"));
  std::vector<QueryTask> tasks;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim_copy(line).empty()) tasks.push_back(parse_task(line));
  }
  return tasks;
}

inline std::string render_jsonl(const BatchResult& batch) {
  std::string out;
  for (const auto& o : batch.outcomes) out += outcome_to_json(o) + "\n";
  return out;
}

}  // namespace smart::testing
