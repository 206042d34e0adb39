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

#include <json.hpp>

namespace smart {
namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw InputError(path + "." + key, "missing required field");
  return obj.at(key);
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) throw InputError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

InputError::InputError(std::string path, const std::string& message)
    : Error(ErrorCode::kInvalidInput, path + ": " + message), path_(std::move(path)) {}

QueryTask parse_task(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw InputError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("$", "expected a JSON object");

  QueryTask task;
  task.query_id = require_string(doc, "query_id", "$");
  task.query_text = require_string(doc, "query", "$");
  if (trim_copy(task.query_text).empty()) throw InputError("$.query", "must not be empty");

  const bool has_docs = doc.contains("documents");
  const bool has_retrieve = doc.contains("retrieve");
  if (has_docs == has_retrieve) {
    throw InputError("$", "exactly one of \"documents\" or \"retrieve\" is required");
  }
  if (has_docs) {
    const json& docs = doc.at("documents");
    if (!docs.is_array()) throw InputError("$.documents", "expected an array");
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const std::string path = "$.documents[" + std::to_string(i) + "]";
      if (!docs[i].is_object()) throw InputError(path, "expected an object");
      SourceDocument d;
      d.id = require_string(docs[i], "id", path);
      d.text = require_string(docs[i], "text", path);
      for (const auto& prev : task.documents) {
        if (prev.id == d.id) throw InputError(path + ".id", "duplicate document id " + d.id);
      }
      task.documents.push_back(std::move(d));
    }
  } else {
    const json& r = doc.at("retrieve");
    if (!r.is_object()) throw InputError("$.retrieve", "expected an object");
    RetrievalDirective directive;
    if (r.contains("top_n")) {
      if (!r.at("top_n").is_number_unsigned() || r.at("top_n").get<std::size_t>() < 1) {
        throw InputError("$.retrieve.top_n", "expected a positive integer");
      }
      directive.top_n = r.at("top_n").get<std::size_t>();
    }
    task.retrieve = directive;
  }
  return task;
}

std::string output_to_json(const PipelineOutput& output, bool include_timings) {
  ordered doc;
  doc["query_id"] = output.query_id;
  ordered selected = ordered::array();
  for (const auto& s : output.selected) {
    selected.push_back(ordered{{"sent_id", s.sentence.sent_id},
                               {"doc_id", s.sentence.doc_id},
                               {"text", s.sentence.text},
                               {"relevance", s.sentence.relevance},
                               {"selection_rank", s.selection_rank}});
  }
  doc["selected"] = std::move(selected);
  doc["gains"] = output.gains;
  doc["objective"] = output.objective;
  doc["stopped_early"] = output.stopped_early;
  doc["stop_reason"] = output.stop_reason;
  doc["candidates"] = output.candidate_count;
  doc["pool_size"] = output.pool_size;
  doc["nli_calls"] = output.nli_calls;
  doc["matrices_ref"] = output.matrices_ref ? ordered(*output.matrices_ref) : ordered(nullptr);
  if (include_timings) {
    ordered t = ordered::object();
    for (const auto& s : output.timings) t[s.stage] = s.millis;
    doc["timings_ms"] = std::move(t);
  }
  return doc.dump();
}

std::string error_to_json(const TaskError& error) {
  ordered doc;
  doc["query_id"] = error.query_id;
  doc["error"] = ordered{{"code", std::string(error_code_name(error.code))},
                         {"message", error.message}};
  return doc.dump();
}

std::string outcome_to_json(const TaskOutcome& outcome, bool include_timings) {
  if (const auto* out = std::get_if<PipelineOutput>(&outcome)) {
    return output_to_json(*out, include_timings);
  }
  return error_to_json(std::get<TaskError>(outcome));
}

}  // namespace smart
