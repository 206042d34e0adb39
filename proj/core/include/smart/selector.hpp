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

// Greedy MAP selection over a DppKernel with the beta-weighted objective
//
//   f(Y) = beta * sum_{i in Y} log(r_i^2) + (1 - beta) * log det K_weighted[Y]
//
// The step gain is f(Y + i) - f(Y). greedy_select() keeps an incremental
// Cholesky factor of K_weighted[Y]; naive_greedy_select() refactors every
// candidate submatrix from scratch and exists as a testing oracle.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "smart/kernel.hpp"

namespace smart {

enum class TieBreak { kLowestIndex };

struct SelectionConfig {
  double beta = 0.8;
  double gamma = 0.8;
  std::size_t k = 5;   // final number of contexts
  std::size_t m = 30;  // pre-rank pool size
  double tol_psd = kDefaultPsdTolerance;
  TieBreak tie_break = TieBreak::kLowestIndex;

  // Throws InvalidHyperparameter unless 0 <= beta <= 1, gamma >= 0,
  // 1 <= k <= m and tol_psd >= 0.
  void validate() const;
};

enum class StopReason {
  kNone,              // reached k
  kPoolExhausted,     // k was larger than the pool and got clamped
  kAllCandidatesSingular,
};

std::string_view stop_reason_name(StopReason reason);

struct SelectionResult {
  std::vector<std::size_t> selected;  // in selection order
  std::vector<double> gains;          // gains[t] is the step-t marginal gain
  double objective = 0.0;             // f(selected)
  bool stopped_early = false;
  StopReason stop_reason = StopReason::kNone;
  bool k_clamped = false;
};

// f(subset). Empty subsets score 0. A numerically singular K_weighted[subset]
// yields -inf unless beta == 1, where the diversity term carries no weight.
double beta_objective(const DppKernel& kernel, std::span<const std::size_t> subset,
                      double beta);

SelectionResult greedy_select(const DppKernel& kernel, const SelectionConfig& config);

SelectionResult naive_greedy_select(const DppKernel& kernel,
                                    const SelectionConfig& config);

struct ExhaustiveResult {
  std::vector<std::size_t> subset;  // ascending; empty if every subset is singular
  double objective = 0.0;
  std::uint64_t evaluated = 0;
};

inline constexpr std::uint64_t kDefaultExhaustiveBudget = 1'000'000;

// Best subset of size min(k, n) by brute force. Throws BudgetExceeded when
// C(n, k) exceeds `budget`.
ExhaustiveResult exhaustive_best_subset(const DppKernel& kernel,
                                        const SelectionConfig& config,
                                        std::uint64_t budget = kDefaultExhaustiveBudget);

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

}  // namespace smart
