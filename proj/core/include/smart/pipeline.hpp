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

// End-to-end context selection for one query:
//
//   retrieve (optional) -> segment -> dedup -> embed -> relevance
//   -> pre_rank(m) -> pairwise NLI over the pool -> symmetrize -> K_sim
//   -> K_weighted(gamma) -> L(r) -> greedy_select(beta, k)

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "smart/error.hpp"
#include "smart/providers.hpp"
#include "smart/segment.hpp"
#include "smart/selector.hpp"

namespace smart {

inline constexpr std::size_t kDefaultRetrieveTopN = 50;

struct SourceDocument {
  std::string id;
  std::string text;
};

struct RetrievalDirective {
  std::size_t top_n = kDefaultRetrieveTopN;
};

// Either `documents` is given or `retrieve` asks the retriever for them.
struct QueryTask {
  std::string query_id;
  std::string query_text;
  std::vector<SourceDocument> documents;
  std::optional<RetrievalDirective> retrieve;

  // Non-empty query text, unique document ids, exactly one source.
  void validate() const;
};

enum class OutputOrder { kSelection, kRelevance };

struct PipelineOptions {
  OutputOrder order = OutputOrder::kSelection;
  // Skip the NLI pass and use a zero conflict matrix.
  bool skip_conflict = false;
  std::optional<std::filesystem::path> persist_dir;
  bool include_timings = false;
  const Abbreviations* abbreviations = nullptr;  // null = builtin table
};

struct StageTiming {
  std::string stage;
  double millis = 0.0;
};

struct SelectedContext {
  ContextSentence sentence;
  std::size_t selection_rank = 0;  // position in greedy order
};

struct PipelineOutput {
  std::string query_id;
  std::vector<SelectedContext> selected;
  std::vector<double> gains;  // greedy order
  double objective = 0.0;
  bool stopped_early = false;
  std::string stop_reason = "none";
  std::size_t candidate_count = 0;  // sentences after dedup
  std::size_t pool_size = 0;        // after pre-ranking
  std::uint64_t nli_calls = 0;
  std::optional<std::string> matrices_ref;
  std::vector<StageTiming> timings;
};

struct TaskError {
  std::string query_id;
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
};

using TaskOutcome = std::variant<PipelineOutput, TaskError>;

// Top m sentences by query relevance, descending, earlier input first on
// ties. Fills each sentence's relevance; every sentence must be embedded.
std::vector<ContextSentence> pre_rank(std::vector<ContextSentence> sentences,
                                      const Embedding& query, std::size_t m);

// Everything up to and including the relation matrices.
struct PreparedTask {
  std::string query_id;
  std::vector<ContextSentence> pool;  // pre-ranked, in relevance order
  RelationMatrices relations;
  std::size_t candidate_count = 0;
  std::uint64_t nli_calls = 0;
  std::vector<StageTiming> timings;
};

PreparedTask prepare_task(const QueryTask& task, const SelectionConfig& config,
                          const ProviderSet& providers, const PipelineOptions& options);

// Kernel construction and greedy selection over a prepared pool.
PipelineOutput select_prepared(const PreparedTask& prepared, const SelectionConfig& config,
                               const PipelineOptions& options);

PipelineOutput run_task(const QueryTask& task, const SelectionConfig& config,
                        const ProviderSet& providers, const PipelineOptions& options = {});

struct BatchSummary {
  std::size_t tasks = 0;
  std::size_t failures = 0;
  double wall_millis = 0.0;
  std::vector<StageTiming> stage_totals;  // summed over successful tasks
};

struct BatchResult {
  std::vector<TaskOutcome> outcomes;  // input order
  BatchSummary summary;
};

// Runs tasks on up to `parallelism` threads. A failing task becomes a
// TaskError in its slot and does not affect the others.
BatchResult run_batch(std::span<const QueryTask> tasks, const SelectionConfig& config,
                      const ProviderSet& providers, const PipelineOptions& options,
                      std::size_t parallelism);

TaskError to_task_error(const std::string& query_id, const std::exception& e);

}  // namespace smart
