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

// Randomized property suites behind `smart verify`. Each suite draws its own
// instances from a seeded generator, so a run is reproducible for a given
// seed on a given standard library.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "smart/kernel.hpp"
#include "smart/selector.hpp"

namespace smart::verify {

// Signature of build_weighted_similarity(); swappable so a harness can check
// that the suites notice a broken decay term.
using WeightingFn = std::function<Matrix(const Matrix&, const ConflictMatrix&, double)>;

struct VerifyOptions {
  std::uint64_t seed = 20240501;
  WeightingFn weighting;  // empty means build_weighted_similarity
};

struct SuiteResult {
  std::string name;   // e.g. "weighted_psd"
  std::string group;  // filter key accepted by --suite
  bool passed = false;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double seconds = 0.0;
  std::string detail;
};

// Filter keys in run order: psd, monotonicity, normalization, greedy,
// collapse, exhaustive.
const std::vector<std::string>& suite_groups();

// Runs every suite whose group equals `group`, or all of them for "all".
// Throws InvalidInput for an unknown group.
std::vector<SuiteResult> run_suites(std::string_view group, const VerifyOptions& options = {});

SuiteResult similarity_psd_suite(const VerifyOptions& options);
SuiteResult conflict_fixture_suite(const VerifyOptions& options);
SuiteResult weighted_psd_suite(const VerifyOptions& options);
SuiteResult monotonicity_suite(const VerifyOptions& options);
SuiteResult normalization_suite(const VerifyOptions& options);
SuiteResult greedy_equivalence_suite(const VerifyOptions& options);
SuiteResult beta_collapse_suite(const VerifyOptions& options);
SuiteResult gamma_collapse_suite(const VerifyOptions& options);
SuiteResult exhaustive_gap_suite(const VerifyOptions& options);

// {"passed": bool, "suites": [{name, group, passed, trials, failures, seconds, detail}]}
std::string summary_json(const std::vector<SuiteResult>& results);

// Instance generators shared with the benchmarks.
std::vector<Embedding> random_embeddings(std::mt19937_64& rng, std::size_t n, std::size_t dim);
Matrix random_directional_conflict(std::mt19937_64& rng, std::size_t n);
Vector random_relevance(std::mt19937_64& rng, std::size_t n);

}  // namespace smart::verify
