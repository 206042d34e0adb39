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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "../support/fixtures.hpp"
#include "smart/error.hpp"
#include "smart/matrix_io.hpp"
#include "smart/task_io.hpp"

namespace smart {
namespace {

using testing::fixture_path;
using testing::fixture_providers;
using testing::fixture_selection;
using testing::fixture_tasks;
using testing::read_text;
using testing::render_jsonl;

QueryTask doc_task(const std::string& id, const std::string& query,
                   std::vector<SourceDocument> docs) {
  QueryTask t;
  t.query_id = id;
  t.query_text = query;
  t.documents = std::move(docs);
  return t;
}

class ThrowingNli final : public NliProvider {
 protected:
  NliJudgment judge_raw(const std::string&, const std::string&) const override {
    throw Error(ErrorCode::kProviderUnavailable, "nli backend down");
  }
};

TEST(Pipeline, GoldenOutputIsByteIdentical) {
  const auto tasks = fixture_tasks();
  const auto batch = run_batch(tasks, fixture_selection(), fixture_providers(), {}, 1);
  EXPECT_EQ(render_jsonl(batch), read_text(fixture_path("golden.jsonl")));
}

TEST(Pipeline, ParallelismDoesNotChangeOutput) {
  const auto tasks = fixture_tasks();
  const auto providers = fixture_providers();
  const auto serial = render_jsonl(run_batch(tasks, fixture_selection(), providers, {}, 1));
  for (std::size_t p : {2u, 8u}) {
    EXPECT_EQ(render_jsonl(run_batch(tasks, fixture_selection(), providers, {}, p)), serial)
        << "parallelism " << p;
  }
}

TEST(Pipeline, NliBudgetIsAllOrderedPairs) {
  auto counting = std::make_shared<CountingNliProvider>(
      std::make_shared<FixtureNli>(FixtureNli::load(fixture_path("nli.json"))));
  const auto providers = fixture_providers(counting);
  for (const auto& task : fixture_tasks()) {
    counting->reset();
    const auto out = run_task(task, fixture_selection(), providers);
    const std::uint64_t p = out.pool_size;
    EXPECT_EQ(counting->calls(), p * (p > 0 ? p - 1 : 0)) << task.query_id;
    EXPECT_EQ(out.nli_calls, counting->calls()) << task.query_id;
    EXPECT_LE(out.pool_size, 30u);
  }
}

TEST(Pipeline, RetrievalTaskFillsPoolToM) {
  const auto tasks = fixture_tasks();
  const auto out = run_task(tasks.front(), fixture_selection(), fixture_providers());
  EXPECT_EQ(out.query_id, "curie-birthplace");
  EXPECT_EQ(out.pool_size, std::min<std::size_t>(out.candidate_count, 30));
  EXPECT_EQ(out.selected.size(), 5u);
  EXPECT_FALSE(out.stopped_early);
  EXPECT_EQ(out.stop_reason, "none");
  std::set<std::string> ids;
  for (const auto& s : out.selected) EXPECT_TRUE(ids.insert(s.sentence.sent_id).second);
}

TEST(Pipeline, FewerSentencesThanKStopsEarly) {
  const auto task = doc_task("small", "Who was Tesla?",
                             {{"a", "Tesla was an inventor. He was born in Smiljan."}});
  const auto out = run_task(task, fixture_selection(), fixture_providers());
  EXPECT_EQ(out.selected.size(), 2u);
  EXPECT_TRUE(out.stopped_early);
  EXPECT_EQ(out.stop_reason, "pool_exhausted");
  EXPECT_EQ(out.gains.size(), 2u);
}

TEST(Pipeline, NoSentencesGivesEmptyPoolRecord) {
  const auto task = doc_task("empty", "Anything?", {{"a", "Hi"}});
  const auto out = run_task(task, fixture_selection(), fixture_providers());
  EXPECT_TRUE(out.selected.empty());
  EXPECT_EQ(out.stop_reason, "empty_pool");
  EXPECT_EQ(out.nli_calls, 0u);
}

TEST(Pipeline, ZeroGammaMatchesSkippedConflict) {
  auto config = fixture_selection();
  config.gamma = 0.0;
  PipelineOptions skip;
  skip.skip_conflict = true;
  const auto providers = fixture_providers();
  for (const auto& task : fixture_tasks()) {
    const auto a = run_task(task, config, providers);
    const auto b = run_task(task, config, providers, skip);
    ASSERT_EQ(a.selected.size(), b.selected.size()) << task.query_id;
    for (std::size_t i = 0; i < a.selected.size(); ++i) {
      EXPECT_EQ(a.selected[i].sentence.sent_id, b.selected[i].sentence.sent_id);
    }
    EXPECT_EQ(a.objective, b.objective) << task.query_id;
    EXPECT_EQ(b.nli_calls, 0u);
  }
}

TEST(Pipeline, FailingTaskDoesNotSinkTheBatch) {
  auto tasks = fixture_tasks();
  tasks.insert(tasks.begin() + 1,
               doc_task("dup", "q?", {{"x", "Some text here."}, {"x", "Other text."}}));
  ProviderSet no_retriever = fixture_providers();
  no_retriever.retriever = nullptr;
  const auto batch = run_batch(tasks, fixture_selection(), no_retriever, {}, 4);
  ASSERT_EQ(batch.outcomes.size(), tasks.size());
  EXPECT_EQ(batch.summary.failures, 2u);
  const auto* retrieve_err = std::get_if<TaskError>(&batch.outcomes[0]);
  ASSERT_NE(retrieve_err, nullptr);
  EXPECT_EQ(retrieve_err->code, ErrorCode::kProviderUnavailable);
  const auto* dup_err = std::get_if<TaskError>(&batch.outcomes[1]);
  ASSERT_NE(dup_err, nullptr);
  EXPECT_EQ(dup_err->code, ErrorCode::kInvalidInput);
  for (std::size_t i = 2; i < tasks.size(); ++i) {
    const auto* out = std::get_if<PipelineOutput>(&batch.outcomes[i]);
    ASSERT_NE(out, nullptr);
    EXPECT_EQ(out->query_id, tasks[i].query_id);
  }
}

TEST(Pipeline, ProviderFailureBecomesErrorRecord) {
  const auto providers = fixture_providers(std::make_shared<ThrowingNli>());
  const auto tasks = fixture_tasks();
  const auto batch = run_batch(tasks, fixture_selection(), providers, {}, 2);
  for (const auto& o : batch.outcomes) {
    const auto* err = std::get_if<TaskError>(&o);
    if (err == nullptr) {
      // Single-sentence pools never reach the NLI stage.
      EXPECT_LE(std::get<PipelineOutput>(o).pool_size, 1u);
      continue;
    }
    EXPECT_EQ(err->code, ErrorCode::kProviderUnavailable);
    EXPECT_NE(error_to_json(*err).find("\"code\":\"ProviderUnavailable\""), std::string::npos);
  }
}

TEST(PreRank, KeepsTopMByRelevanceStably) {
  const HashingEmbedder e;
  std::vector<ContextSentence> s;
  for (const char* text : {"rivers are long", "the nile is a river", "cats purr",
                           "the nile is a river"}) {
    ContextSentence c;
    c.sent_id = std::to_string(s.size());
    c.text = text;
    const std::string t[] = {text};
    c.embedding = e.embed_batch(t).front();
    s.push_back(std::move(c));
  }
  const std::string q[] = {"the nile is a river"};
  const auto query = e.embed_batch(q).front();
  const auto top = pre_rank(s, query, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].sent_id, "1");
  EXPECT_EQ(top[1].sent_id, "3");
  EXPECT_DOUBLE_EQ(top[0].relevance, 1.0);
  EXPECT_GE(top[1].relevance, top[2].relevance);
  EXPECT_EQ(pre_rank(s, query, 10).size(), 4u);
  EXPECT_THROW(pre_rank(s, query, 0), Error);
}

TEST(Pipeline, RelevanceOrderKeepsSelectionRanks) {
  PipelineOptions by_relevance;
  by_relevance.order = OutputOrder::kRelevance;
  const auto tasks = fixture_tasks();
  const auto a = run_task(tasks[2], fixture_selection(), fixture_providers());
  const auto b = run_task(tasks[2], fixture_selection(), fixture_providers(), by_relevance);
  ASSERT_EQ(a.selected.size(), b.selected.size());
  for (std::size_t i = 1; i < b.selected.size(); ++i) {
    EXPECT_GE(b.selected[i - 1].sentence.relevance, b.selected[i].sentence.relevance);
  }
  for (const auto& s : b.selected) {
    EXPECT_EQ(a.selected[s.selection_rank].sentence.sent_id, s.sentence.sent_id);
  }
}

TEST(Pipeline, PersistedMatricesRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "smart_pipeline_persist";
  std::filesystem::remove_all(dir);
  PipelineOptions opts;
  opts.persist_dir = dir;
  const auto tasks = fixture_tasks();
  const auto prepared = prepare_task(tasks[1], fixture_selection(), fixture_providers(), opts);
  const auto out = select_prepared(prepared, fixture_selection(), opts);
  ASSERT_TRUE(out.matrices_ref);
  const auto dump = read_matrix_dump(*out.matrices_ref);
  EXPECT_EQ(dump.query_id, "tesla-birth");
  EXPECT_EQ(dump.relations.k_sim, prepared.relations.k_sim);
  EXPECT_EQ(dump.relations.conflict.matrix(), prepared.relations.conflict.matrix());
  EXPECT_EQ(dump.relations.relevance, prepared.relations.relevance);
  std::filesystem::remove_all(dir);
}

TEST(Pipeline, TimingsCoverEveryStage) {
  const auto tasks = fixture_tasks();
  const auto out = run_task(tasks[1], fixture_selection(), fixture_providers());
  std::vector<std::string> stages;
  for (const auto& t : out.timings) {
    stages.push_back(t.stage);
    EXPECT_GE(t.millis, 0.0);
  }
  EXPECT_EQ(stages, (std::vector<std::string>{"retrieve", "segment", "dedup", "embed",
                                              "pre_rank", "nli", "relations", "persist",
                                              "kernel", "select"}));
  EXPECT_EQ(output_to_json(out).find("timings_ms"), std::string::npos);
  EXPECT_NE(output_to_json(out, true).find("\"timings_ms\""), std::string::npos);
}

}  // namespace
}  // namespace smart
