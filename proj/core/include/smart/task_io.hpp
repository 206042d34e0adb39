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

// JSONL wire formats.
//
// Input, one task per line:
//   {"query_id": "q1", "query": "...", "documents": [{"id": "d1", "text": "..."}]}
//   {"query_id": "q2", "query": "...", "retrieve": {"top_n": 50}}
//
// Output, one record per line: a PipelineOutput object, or
//   {"query_id": "q3", "error": {"code": "ProviderUnavailable", "message": "..."}}

#include <string>
#include <string_view>

#include "smart/pipeline.hpp"

namespace smart {

// Input validation failure that knows which field was wrong ("$.query").
class InputError : public Error {
 public:
  InputError(std::string path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Throws InputError on malformed JSON or a missing/invalid field.
QueryTask parse_task(std::string_view line);

// Single-line JSON without trailing newline. Timings are written only when
// `include_timings` is set, so the default rendering is byte-stable.
std::string output_to_json(const PipelineOutput& output, bool include_timings = false);
std::string error_to_json(const TaskError& error);
std::string outcome_to_json(const TaskOutcome& outcome, bool include_timings = false);

}  // namespace smart
