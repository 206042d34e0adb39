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

#include "smart/task_io.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

namespace smart {
namespace {

std::string path_of(const std::string& line) {
  try {
    parse_task(line);
  } catch (const InputError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
    return e.path();
  }
  ADD_FAILURE() << "expected InputError for " << line;
  return "";
}

TEST(ParseTask, DocumentsAndRetrieve) {
  const auto t = parse_task(
      R"({"query_id":"q1","query":"Who?","documents":[{"id":"a","text":"A."},{"id":"b","text":"B."}]})");
  EXPECT_EQ(t.query_id, "q1");
  EXPECT_EQ(t.query_text, "Who?");
  ASSERT_EQ(t.documents.size(), 2u);
  EXPECT_EQ(t.documents[1].id, "b");
  EXPECT_FALSE(t.retrieve);

  const auto r = parse_task(R"({"query_id":"q2","query":"Why?","retrieve":{"top_n":7}})");
  ASSERT_TRUE(r.retrieve);
  EXPECT_EQ(r.retrieve->top_n, 7u);
  const auto d = parse_task(R"({"query_id":"q3","query":"Why?","retrieve":{}})");
  EXPECT_EQ(d.retrieve->top_n, kDefaultRetrieveTopN);
}

TEST(ParseTask, FieldPathsInErrors) {
  EXPECT_EQ(path_of(R"({"query_id":"q","documents":[]})"), "$.query");
  EXPECT_EQ(path_of(R"({"query":"x","documents":[]})"), "$.query_id");
  EXPECT_EQ(path_of(R"({"query_id":"q","query":"  ","documents":[]})"), "$.query");
  EXPECT_EQ(path_of(R"({"query_id":"q","query":"x"})"), "$");
  EXPECT_EQ(path_of(R"({"query_id":"q","query":"x","documents":[],"retrieve":{}})"), "$");
  EXPECT_EQ(path_of(R"({"query_id":"q","query":"x","documents":[{"id":"a"}]})"),
            "$.documents[0].text");
  EXPECT_EQ(path_of(
                R"({"query_id":"q","query":"x","documents":[{"id":"a","text":"t"},{"id":"a","text":"u"}]})"),
            "$.documents[1].id");
  EXPECT_EQ(path_of(R"({"query_id":"q","query":"x","retrieve":{"top_n":0}})"),
            "$.retrieve.top_n");
  EXPECT_EQ(path_of("not json"), "$");
  EXPECT_EQ(path_of("[1,2]"), "$");
}

TEST(OutputJson, FieldOrderAndTimingsOptIn) {
  PipelineOutput out;
  out.query_id = "q1";
  ContextSentence s;
  s.sent_id = "d:0";
  s.doc_id = "d";
  s.text = "Hello there.";
  s.relevance = 0.5;
  out.selected.push_back({s, 0});
  out.gains = {-1.25};
  out.objective = -1.25;
  out.stop_reason = "none";
  out.candidate_count = 3;
  out.pool_size = 2;
  out.nli_calls = 2;
  out.timings = {{"segment", 1.5}};
  const std::string line = output_to_json(out);
  EXPECT_EQ(line,
            R"({"query_id":"q1","selected":[{"sent_id":"d:0","doc_id":"d","text":"Hello there.",)"
            R"("relevance":0.5,"selection_rank":0}],"gains":[-1.25],"objective":-1.25,)"
            R"("stopped_early":false,"stop_reason":"none","candidates":3,"pool_size":2,)"
            R"("nli_calls":2,"matrices_ref":null})");
  const auto with = nlohmann::json::parse(output_to_json(out, true));
  EXPECT_EQ(with.at("timings_ms").at("segment"), 1.5);
}

TEST(OutputJson, ErrorRecord) {
  const TaskError e{"q9", ErrorCode::kProviderUnavailable, "down"};
  EXPECT_EQ(error_to_json(e),
            R"({"query_id":"q9","error":{"code":"ProviderUnavailable","message":"down"}})");
  EXPECT_EQ(outcome_to_json(TaskOutcome{e}), error_to_json(e));
}

}  // namespace
}  // namespace smart
