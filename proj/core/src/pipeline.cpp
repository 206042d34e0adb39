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

#include "smart/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "internal/parallel.hpp"
#include "smart/matrix_io.hpp"

namespace smart {
namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(std::vector<StageTiming>& sink) : sink_(sink) {}

  void lap(const char* stage) {
    const auto now = Clock::now();
    sink_.push_back(
        {stage, std::chrono::duration<double, std::milli>(now - last_).count()});
    last_ = now;
  }

 private:
  std::vector<StageTiming>& sink_;
  Clock::time_point last_ = Clock::now();
};

std::vector<SourceDocument> gather_documents(const QueryTask& task,
                                             const ProviderSet& providers) {
  if (!task.retrieve) return task.documents;
  if (!providers.retriever) {
    throw Error(ErrorCode::kProviderUnavailable,
                "task " + task.query_id + " asks for retrieval but no retriever is configured");
  }
  std::vector<SourceDocument> docs;
  for (auto& hit : providers.retriever->retrieve(task.query_text, task.retrieve->top_n)) {
    docs.push_back({std::move(hit.id), std::move(hit.text)});
  }
  return docs;
}

Matrix directional_conflicts(const std::vector<ContextSentence>& pool,
                             const NliProvider& nli, std::uint64_t& calls) {
  const std::size_t p = pool.size();
  std::vector<NliPair> pairs;
  pairs.reserve(p * (p > 0 ? p - 1 : 0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (i != j) pairs.push_back({pool[i].text, pool[j].text});
    }
  }
  const auto judgments = nli.nli_batch(pairs);
  calls = judgments.size();
  const auto n = static_cast<Eigen::Index>(p);
  Matrix directional = Matrix::Zero(n, n);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) directional(i, j) = judgments[idx++].contradiction;
    }
  }
  return directional;
}

void add_timings(std::vector<StageTiming>& totals, const std::vector<StageTiming>& t) {
  for (const auto& s : t) {
    auto it = std::find_if(totals.begin(), totals.end(),
                           [&](const StageTiming& x) { return x.stage == s.stage; });
    if (it == totals.end()) {
      totals.push_back(s);
    } else {
      it->millis += s.millis;
    }
  }
}

}  // namespace

void QueryTask::validate() const {
  if (trim_copy(query_text).empty()) {
    throw Error(ErrorCode::kInvalidInput, "task " + query_id + ": query text is empty");
  }
  if (retrieve && !documents.empty()) {
    throw Error(ErrorCode::kInvalidInput,
                "task " + query_id + ": give either documents or a retrieval directive");
  }
  if (retrieve && retrieve->top_n < 1) {
    throw Error(ErrorCode::kInvalidInput, "task " + query_id + ": top_n must be >= 1");
  }
  std::set<std::string> ids;
  for (const auto& d : documents) {
    if (!ids.insert(d.id).second) {
      throw Error(ErrorCode::kInvalidInput,
                  "task " + query_id + ": duplicate document id " + d.id);
    }
  }
}

std::vector<ContextSentence> pre_rank(std::vector<ContextSentence> sentences,
                                      const Embedding& query, std::size_t m) {
  if (m < 1) throw Error(ErrorCode::kInvalidHyperparameter, "pre-rank size must be >= 1");
  if (sentences.empty()) return sentences;
  std::vector<Embedding> embeddings;
  embeddings.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!sentences[i].embedding) {
      throw Error(ErrorCode::kInvalidInput,
                  "sentence " + sentences[i].sent_id + " has no embedding", {i});
    }
    embeddings.push_back(*sentences[i].embedding);
  }
  const Vector r = query_relevance(query, embeddings);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    sentences[i].relevance = r[static_cast<Eigen::Index>(i)];
  }
  std::stable_sort(sentences.begin(), sentences.end(),
                   [](const auto& a, const auto& b) { return a.relevance > b.relevance; });
  if (sentences.size() > m) sentences.resize(m);
  return sentences;
}

PreparedTask prepare_task(const QueryTask& task, const SelectionConfig& config,
                          const ProviderSet& providers, const PipelineOptions& options) {
  task.validate();
  config.validate();
  if (!providers.embedder || !providers.nli) {
    throw Error(ErrorCode::kProviderUnavailable, "embedding and NLI providers are required");
  }
  const Abbreviations& abbreviations =
      options.abbreviations ? *options.abbreviations : Abbreviations::builtin();

  std::vector<StageTiming> timings;
  StageTimer timer(timings);

  const auto documents = gather_documents(task, providers);
  timer.lap("retrieve");

  std::vector<ContextSentence> sentences;
  for (const auto& doc : documents) {
    auto part = segment_sentences(doc.id, doc.text, abbreviations);
    std::move(part.begin(), part.end(), std::back_inserter(sentences));
  }
  timer.lap("segment");

  sentences = dedup_sentences(std::move(sentences));
  const std::size_t candidate_count = sentences.size();
  timer.lap("dedup");

  const std::string query_text[] = {task.query_text};
  const Embedding query = providers.embedder->embed_batch(query_text).front();
  if (!sentences.empty()) {
    std::vector<std::string> texts;
    texts.reserve(sentences.size());
    for (const auto& s : sentences) texts.push_back(s.text);
    auto embeddings = providers.embedder->embed_batch(texts);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      sentences[i].embedding = std::move(embeddings[i]);
    }
  }
  timer.lap("embed");

  auto pool = pre_rank(std::move(sentences), query, config.m);
  timer.lap("pre_rank");

  const auto n = static_cast<Eigen::Index>(pool.size());
  std::uint64_t nli_calls = 0;
  Matrix directional = Matrix::Zero(n, n);
  if (!options.skip_conflict && pool.size() > 1) {
    directional = directional_conflicts(pool, *providers.nli, nli_calls);
  }
  timer.lap("nli");

  std::vector<Embedding> pool_embeddings;
  pool_embeddings.reserve(pool.size());
  Vector relevance(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = pool[static_cast<std::size_t>(i)];
    pool_embeddings.push_back(*s.embedding);
    relevance[i] = s.relevance;
  }
  RelationMatrices relations{
      pool.empty() ? Matrix(0, 0) : build_similarity_matrix(pool_embeddings),
      symmetrize_conflict(directional), std::move(relevance)};
  relations.validate();
  timer.lap("relations");

  return PreparedTask{task.query_id, std::move(pool),     std::move(relations),
                      candidate_count, nli_calls,         std::move(timings)};
}

PipelineOutput select_prepared(const PreparedTask& prepared, const SelectionConfig& config,
                               const PipelineOptions& options) {
  config.validate();
  PipelineOutput out;
  out.query_id = prepared.query_id;
  out.candidate_count = prepared.candidate_count;
  out.pool_size = prepared.pool.size();
  out.nli_calls = prepared.nli_calls;
  out.timings = prepared.timings;
  StageTimer timer(out.timings);

  if (options.persist_dir) {
    out.matrices_ref =
        write_matrix_dump(*options.persist_dir, prepared.query_id, prepared.relations)
            .string();
  }
  timer.lap("persist");

  if (prepared.pool.empty()) {
    out.stopped_early = true;
    out.stop_reason = "empty_pool";
    timer.lap("kernel");
    timer.lap("select");
    return out;
  }

  const DppKernel kernel = build_kernel(prepared.relations, config.gamma);
  timer.lap("kernel");

  const SelectionResult result = greedy_select(kernel, config);
  timer.lap("select");

  for (std::size_t rank = 0; rank < result.selected.size(); ++rank) {
    out.selected.push_back({prepared.pool[result.selected[rank]], rank});
  }
  if (options.order == OutputOrder::kRelevance) {
    std::stable_sort(out.selected.begin(), out.selected.end(), [](const auto& a, const auto& b) {
      return a.sentence.relevance > b.sentence.relevance;
    });
  }
  out.gains = result.gains;
  out.objective = result.objective;
  out.stopped_early = result.stopped_early;
  out.stop_reason = std::string(stop_reason_name(result.stop_reason));
  return out;
}

PipelineOutput run_task(const QueryTask& task, const SelectionConfig& config,
                        const ProviderSet& providers, const PipelineOptions& options) {
  return select_prepared(prepare_task(task, config, providers, options), config, options);
}

TaskError to_task_error(const std::string& query_id, const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return {query_id, err->code(), err->what()};
  }
  return {query_id, ErrorCode::kInternal, e.what()};
}

BatchResult run_batch(std::span<const QueryTask> tasks, const SelectionConfig& config,
                      const ProviderSet& providers, const PipelineOptions& options,
                      std::size_t parallelism) {
  if (parallelism < 1) {
    throw Error(ErrorCode::kInvalidHyperparameter, "parallelism must be >= 1");
  }
  const auto start = Clock::now();
  BatchResult batch;
  batch.outcomes.resize(tasks.size());
  detail::parallel_for(tasks.size(), parallelism, [&](std::size_t i) {
    try {
      batch.outcomes[i] = run_task(tasks[i], config, providers, options);
    } catch (const std::exception& e) {
      batch.outcomes[i] = to_task_error(tasks[i].query_id, e);
    }
  });
  batch.summary.tasks = tasks.size();
  for (const auto& outcome : batch.outcomes) {
    if (const auto* out = std::get_if<PipelineOutput>(&outcome)) {
      add_timings(batch.summary.stage_totals, out->timings);
    } else {
      ++batch.summary.failures;
    }
  }
  batch.summary.wall_millis =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return batch;
}

}  // namespace smart
