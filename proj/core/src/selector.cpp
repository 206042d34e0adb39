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

#include "smart/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smart/error.hpp"

namespace smart {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_r2(const DppKernel& kernel, std::size_t i) {
  const double r = kernel.relevance()[static_cast<Eigen::Index>(i)];
  return std::log(r * r);
}

void require_nonempty(const DppKernel& kernel) {
  if (kernel.size() == 0) {
    throw Error(ErrorCode::kEmptyPool, "cannot select from an empty candidate pool");
  }
}

SelectionResult start_result(const DppKernel& kernel, const SelectionConfig& config,
                             std::size_t& k_eff) {
  config.validate();
  require_nonempty(kernel);
  SelectionResult result;
  k_eff = std::min(config.k, kernel.size());
  if (k_eff < config.k) {
    result.k_clamped = true;
    result.stopped_early = true;
    result.stop_reason = StopReason::kPoolExhausted;
  }
  return result;
}

void stop_singular(SelectionResult& result) {
  result.stopped_early = true;
  result.stop_reason = StopReason::kAllCandidatesSingular;
}

}  // namespace

void SelectionConfig::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidHyperparameter,
                "beta must lie in [0, 1], got " + std::to_string(beta));
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidHyperparameter,
                "gamma must be >= 0, got " + std::to_string(gamma));
  }
  if (k < 1) throw Error(ErrorCode::kInvalidHyperparameter, "k must be >= 1");
  if (m < k) {
    throw Error(ErrorCode::kInvalidHyperparameter,
                "pre-rank size m (" + std::to_string(m) + ") must be >= k (" +
                    std::to_string(k) + ")");
  }
  if (!(tol_psd >= 0.0)) {
    throw Error(ErrorCode::kInvalidHyperparameter, "tol_psd must be >= 0");
  }
}

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kNone: return "none";
    case StopReason::kPoolExhausted: return "pool_exhausted";
    case StopReason::kAllCandidatesSingular: return "all_candidates_singular";
  }
  return "unknown";
}

double beta_objective(const DppKernel& kernel, std::span<const std::size_t> subset,
                      double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidHyperparameter, "beta must lie in [0, 1]");
  }
  validate_subset(subset, kernel.size());
  double relevance = 0.0;
  for (std::size_t i : subset) relevance += log_r2(kernel, i);
  if (beta == 1.0) return relevance;
  const auto log_det = cholesky_log_det(principal_submatrix(kernel.k_weighted(), subset));
  if (!log_det) return kNegInf;
  return beta * relevance + (1.0 - beta) * *log_det;
}

SelectionResult greedy_select(const DppKernel& kernel, const SelectionConfig& config) {
  std::size_t k_eff = 0;
  SelectionResult result = start_result(kernel, config, k_eff);
  const double beta = config.beta;
  const Matrix& k = kernel.k_weighted();
  const auto n = static_cast<Eigen::Index>(kernel.size());

  // Row i of `factor` holds the Cholesky row of candidate i against the
  // selected items; `pivot[i]` is its remaining Schur complement.
  Matrix factor = Matrix::Zero(n, static_cast<Eigen::Index>(k_eff));
  Vector pivot = k.diagonal();
  std::vector<bool> taken(kernel.size(), false);
  double max_selected_diag = 0.0;

  for (std::size_t step = 0; step < k_eff; ++step) {
    Eigen::Index best = -1;
    double best_gain = kNegInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      double gain = beta * log_r2(kernel, static_cast<std::size_t>(i));
      if (beta < 1.0) {
        const double floor = kRelativePivotFloor *
                             std::max(std::max(max_selected_diag, k(i, i)), 0.0);
        if (!(pivot[i] > floor)) continue;
        gain += (1.0 - beta) * std::log(pivot[i]);
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best < 0) {
      stop_singular(result);
      break;
    }

    const auto t = static_cast<Eigen::Index>(step);
    taken[static_cast<std::size_t>(best)] = true;
    result.selected.push_back(static_cast<std::size_t>(best));
    result.gains.push_back(best_gain);
    max_selected_diag = std::max(max_selected_diag, k(best, best));
    if (step + 1 == k_eff) break;

    const double d = std::sqrt(pivot[best]);
    factor(best, t) = d;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      double s = k(i, best);
      for (Eigen::Index s_idx = 0; s_idx < t; ++s_idx) {
        s -= factor(i, s_idx) * factor(best, s_idx);
      }
      const double e = s / d;
      factor(i, t) = e;
      pivot[i] -= e * e;
    }
  }

  result.objective = beta_objective(kernel, result.selected, beta);
  return result;
}

SelectionResult naive_greedy_select(const DppKernel& kernel,
                                    const SelectionConfig& config) {
  std::size_t k_eff = 0;
  SelectionResult result = start_result(kernel, config, k_eff);
  std::vector<bool> taken(kernel.size(), false);
  double current = 0.0;

  for (std::size_t step = 0; step < k_eff; ++step) {
    std::size_t best = kernel.size();
    double best_gain = kNegInf;
    double best_value = kNegInf;
    std::vector<std::size_t> trial = result.selected;
    trial.push_back(0);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      if (taken[i]) continue;
      trial.back() = i;
      const double value = beta_objective(kernel, trial, config.beta);
      if (value == kNegInf) continue;
      const double gain = value - current;
      if (gain > best_gain) {
        best_gain = gain;
        best_value = value;
        best = i;
      }
    }
    if (best == kernel.size()) {
      stop_singular(result);
      break;
    }
    taken[best] = true;
    result.selected.push_back(best);
    result.gains.push_back(best_gain);
    current = best_value;
  }

  result.objective = beta_objective(kernel, result.selected, config.beta);
  return result;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // c * (n - k + i) / i is exact at every step; guard the multiplication.
    const std::uint64_t num = n - k + i;
    if (c > kMax / num) return kMax;
    c = c * num / i;
  }
  return c;
}

ExhaustiveResult exhaustive_best_subset(const DppKernel& kernel,
                                        const SelectionConfig& config,
                                        std::uint64_t budget) {
  config.validate();
  require_nonempty(kernel);
  const std::size_t n = kernel.size();
  const std::size_t k = std::min(config.k, n);
  const std::uint64_t total = binomial(n, k);
  if (total > budget) {
    throw Error(ErrorCode::kBudgetExceeded,
                "C(" + std::to_string(n) + ", " + std::to_string(k) + ") = " +
                    std::to_string(total) + " subsets exceeds budget " +
                    std::to_string(budget));
  }

  ExhaustiveResult best;
  best.objective = kNegInf;
  std::vector<std::size_t> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = i;
  while (true) {
    const double value = beta_objective(kernel, combo, config.beta);
    ++best.evaluated;
    if (value > best.objective) {
      best.objective = value;
      best.subset = combo;
    }
    // Advance to the next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && combo[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++combo[pos - 1];
    for (std::size_t j = pos; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  return best;
}

}  // namespace smart
