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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "smart/error.hpp"

namespace smart {
namespace {

struct RandomCase {
  Matrix k_sim;
  ConflictMatrix conflict = ConflictMatrix::zeros(0);
  Vector r;
};

RandomCase random_case(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  RandomCase c;
  std::vector<Embedding> emb;
  for (const auto& v : testing::gaussian_vectors(rng, n, dim)) emb.emplace_back(v);
  c.k_sim = build_similarity_matrix(emb);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) p(i, j) = u(rng);
    }
  }
  c.conflict = symmetrize_conflict(p);
  c.r.resize(n);
  std::uniform_real_distribution<double> rel(0.05, 1.0);
  for (auto& x : c.r) x = rel(rng);
  return c;
}

SelectionConfig make_config(double beta, std::size_t k, std::size_t m) {
  SelectionConfig c;
  c.beta = beta;
  c.k = k;
  c.m = m;
  return c;
}

TEST(Config, Validation) {
  EXPECT_NO_THROW(SelectionConfig{}.validate());
  auto expect_bad = [](SelectionConfig c) {
    try {
      c.validate();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidHyperparameter);
    }
  };
  SelectionConfig c;
  c.beta = 1.1;
  expect_bad(c);
  c = {};
  c.gamma = -1;
  expect_bad(c);
  c = {};
  c.k = 0;
  expect_bad(c);
  c = {};
  c.k = 31;
  expect_bad(c);
}

TEST(Objective, HandValue) {
  Matrix kw(2, 2);
  kw << 1.0, 0.3, 0.3, 1.0;
  Vector r(2);
  r << 0.9, 0.4;
  const DppKernel kernel = build_kernel(kw, r);
  const std::size_t both[] = {0, 1};
  const double expected =
      0.5 * (std::log(0.81) + std::log(0.16)) + 0.5 * std::log(1.0 - 0.09);
  EXPECT_NEAR(beta_objective(kernel, both, 0.5), expected, 1e-14);
  EXPECT_NEAR(beta_objective(kernel, both, 0.5), -1.0688, 1e-4);
  EXPECT_NEAR(beta_objective(kernel, both, 1.0), std::log(0.81) + std::log(0.16), 1e-14);
  EXPECT_NEAR(beta_objective(kernel, both, 0.0), std::log(0.91), 1e-14);
  EXPECT_EQ(beta_objective(kernel, {}, 0.3), 0.0);
}

TEST(Objective, SingularSubsetOnlyMattersBelowBetaOne) {
  const DppKernel kernel = build_kernel(Matrix::Ones(2, 2), Vector::Constant(2, 0.5));
  const std::size_t both[] = {0, 1};
  EXPECT_EQ(beta_objective(kernel, both, 0.5), -INFINITY);
  EXPECT_NEAR(beta_objective(kernel, both, 1.0), 2 * std::log(0.25), 1e-15);
}

TEST(Greedy, SingleStepPicksBestScalarScore) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = random_case(rng, 12, 16);
    const DppKernel kernel = build_kernel(build_weighted_similarity(c.k_sim, c.conflict, 0.8), c.r);
    const auto result = greedy_select(kernel, make_config(0.4, 1, 12));
    Eigen::Index best = 0;
    c.r.maxCoeff(&best);
    ASSERT_EQ(result.selected.size(), 1u);
    EXPECT_EQ(result.selected[0], static_cast<std::size_t>(best));
  }
}

TEST(Greedy, BetaOneIsRelevanceArgsort) {
  Vector r(6);
  r << 0.2, 0.9, 0.5, 0.9, 0.1, 0.7;  // tie between 1 and 3 goes to 1
  std::mt19937_64 rng(22);
  const auto c = random_case(rng, 6, 2);  // rank 2 similarity: diversity would matter
  const DppKernel kernel = build_kernel(c.k_sim, r);
  const auto result = greedy_select(kernel, make_config(1.0, 4, 6));
  EXPECT_EQ(result.selected, (std::vector<std::size_t>{1, 3, 5, 2}));
  EXPECT_FALSE(result.stopped_early);
}

TEST(Greedy, DuplicateRowsStopEarly) {
  const DppKernel kernel = build_kernel(Matrix::Ones(2, 2), Vector::Constant(2, 0.7));
  for (const auto& select : {&greedy_select, &naive_greedy_select}) {
    const auto result = select(kernel, make_config(0.5, 2, 2));
    EXPECT_EQ(result.selected, (std::vector<std::size_t>{0}));
    EXPECT_TRUE(result.stopped_early);
    EXPECT_EQ(result.stop_reason, StopReason::kAllCandidatesSingular);
    EXPECT_EQ(stop_reason_name(result.stop_reason), "all_candidates_singular");
  }
  // With beta = 1 the determinant carries no weight, so both are taken.
  EXPECT_EQ(greedy_select(kernel, make_config(1.0, 2, 2)).selected.size(), 2u);
}

TEST(Greedy, KLargerThanPoolIsClamped) {
  const DppKernel kernel = build_kernel(Matrix::Identity(3, 3), Vector::Constant(3, 0.5));
  const auto result = greedy_select(kernel, make_config(0.8, 5, 30));
  EXPECT_EQ(result.selected.size(), 3u);
  EXPECT_TRUE(result.k_clamped);
  EXPECT_TRUE(result.stopped_early);
  EXPECT_EQ(result.stop_reason, StopReason::kPoolExhausted);
}

TEST(Greedy, EmptyKernelIsAnError) {
  const DppKernel kernel = build_kernel(Matrix(0, 0), Vector(0));
  try {
    greedy_select(kernel, SelectionConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyPool);
  }
}

TEST(Greedy, ExhaustionMatchesFullObjective) {
  std::mt19937_64 rng(23);
  const auto c = random_case(rng, 7, 10);
  const DppKernel kernel = build_kernel(build_weighted_similarity(c.k_sim, c.conflict, 1.0), c.r);
  for (const auto& select : {&greedy_select, &naive_greedy_select}) {
    const auto result = select(kernel, make_config(0.6, 7, 7));
    std::vector<std::size_t> sorted = result.selected;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6}));
    EXPECT_NEAR(result.objective, beta_objective(kernel, result.selected, 0.6), 1e-12);
    const double sum = std::accumulate(result.gains.begin(), result.gains.end(), 0.0);
    EXPECT_NEAR(sum, result.objective, 1e-9);
  }
}

TEST(Greedy, GainsAreObjectiveDifferences) {
  std::mt19937_64 rng(24);
  const auto c = random_case(rng, 15, 20);
  const DppKernel kernel = build_kernel(build_weighted_similarity(c.k_sim, c.conflict, 0.8), c.r);
  const auto result = greedy_select(kernel, make_config(0.3, 6, 15));
  std::vector<std::size_t> prefix;
  double previous = 0.0;
  for (std::size_t t = 0; t < result.selected.size(); ++t) {
    prefix.push_back(result.selected[t]);
    const double now = beta_objective(kernel, prefix, 0.3);
    EXPECT_NEAR(result.gains[t], now - previous, 1e-9);
    previous = now;
  }
}

TEST(Greedy, MatchesNaiveOracle) {
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<std::size_t> pick_n(1, 30);
  std::uniform_int_distribution<std::size_t> pick_k(1, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = pick_n(rng);
    const auto c = random_case(rng, n, 1 + trial % 40);
    const double gamma = trial % 3 == 0 ? 0.0 : 5.0 * unit(rng);
    const DppKernel kernel =
        build_kernel(build_weighted_similarity(c.k_sim, c.conflict, gamma), c.r);
    const std::size_t k = pick_k(rng);
    const auto config = make_config(unit(rng), k, std::max(k, n));
    const auto fast = greedy_select(kernel, config);
    const auto slow = naive_greedy_select(kernel, config);
    ASSERT_EQ(fast.selected, slow.selected) << "trial " << trial;
    ASSERT_EQ(fast.gains.size(), slow.gains.size());
    for (std::size_t s = 0; s < fast.gains.size(); ++s) {
      EXPECT_NEAR(fast.gains[s], slow.gains[s], 1e-9);
    }
    EXPECT_EQ(fast.stop_reason, slow.stop_reason);
  }
}

TEST(Greedy, PermutationEquivariance) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10;
    const auto c = random_case(rng, n, 14);
    const Matrix kw = build_weighted_similarity(c.k_sim, c.conflict, 0.9);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix pkw(n, n);
    Vector pr(n);
    for (std::size_t a = 0; a < n; ++a) {
      pr[a] = c.r[perm[a]];
      for (std::size_t b = 0; b < n; ++b) pkw(a, b) = kw(perm[a], perm[b]);
    }
    const auto config = make_config(0.5, 4, n);
    const auto base = greedy_select(build_kernel(kw, c.r), config);
    const auto permuted = greedy_select(build_kernel(pkw, pr), config);
    ASSERT_EQ(base.selected.size(), permuted.selected.size());
    for (std::size_t t = 0; t < base.selected.size(); ++t) {
      EXPECT_EQ(perm[permuted.selected[t]], base.selected[t]);
    }
  }
}

TEST(Greedy, GammaZeroEqualsConflictFree) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_case(rng, 20, 24);
    const auto config = make_config(0.6, 5, 20);
    const auto with_conflict =
        greedy_select(build_kernel(build_weighted_similarity(c.k_sim, c.conflict, 0.0), c.r),
                      config);
    const auto conflict_free = greedy_select(build_kernel(c.k_sim, c.r), config);
    EXPECT_EQ(with_conflict.selected, conflict_free.selected);
  }
}

TEST(Greedy, ConflictRepelsPair) {
  // Candidates 1 and 2 are similar; raising their conflict lowers {1, 2}.
  Matrix k(3, 3);
  k << 1.0, 0.1, 0.2, 0.1, 1.0, 0.6, 0.2, 0.6, 1.0;
  Vector r(3);
  r << 0.8, 0.9, 0.85;
  const std::size_t pair[] = {1, 2};
  double previous = INFINITY;
  for (int step = 0; step <= 10; ++step) {
    Matrix c = Matrix::Zero(3, 3);
    c(1, 2) = c(2, 1) = step / 10.0;
    const DppKernel kernel =
        build_kernel(build_weighted_similarity(k, ConflictMatrix::from_symmetric(c), 2.0), r);
    const double value = beta_objective(kernel, pair, 0.5);
    EXPECT_LE(value, previous);
    previous = value;
  }
  Matrix low = Matrix::Zero(3, 3);
  Matrix high = Matrix::Zero(3, 3);
  high(1, 2) = high(2, 1) = 1.0;
  const auto config = make_config(0.5, 2, 3);
  const auto best_low = exhaustive_best_subset(
      build_kernel(build_weighted_similarity(k, ConflictMatrix::from_symmetric(low), 2.0), r),
      config);
  const auto best_high = exhaustive_best_subset(
      build_kernel(build_weighted_similarity(k, ConflictMatrix::from_symmetric(high), 2.0), r),
      config);
  EXPECT_EQ(best_low.subset, (std::vector<std::size_t>{1, 2}));
  EXPECT_NE(best_high.subset, (std::vector<std::size_t>{1, 2}));
}

TEST(Greedy, DeterministicAcrossRepeats) {
  std::mt19937_64 rng(28);
  const auto c = random_case(rng, 25, 30);
  const DppKernel kernel = build_kernel(build_weighted_similarity(c.k_sim, c.conflict, 0.8), c.r);
  const auto a = greedy_select(kernel, SelectionConfig{});
  const auto b = greedy_select(kernel, SelectionConfig{});
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.gains, b.gains);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(Exhaustive, BruteForceOracleAgrees) {
  std::mt19937_64 rng(29);
  const auto c = random_case(rng, 8, 10);
  const DppKernel kernel = build_kernel(build_weighted_similarity(c.k_sim, c.conflict, 0.5), c.r);
  const auto config = make_config(0.3, 3, 8);
  const auto best = exhaustive_best_subset(kernel, config);
  EXPECT_EQ(best.evaluated, binomial(8, 3));
  // Independent scan with the elimination determinant.
  testing::Dense kw(8, std::vector<double>(8));
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) kw[i][j] = kernel.k_weighted()(i, j);
  }
  double oracle_best = -INFINITY;
  std::vector<std::size_t> oracle_subset;
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = a + 1; b < 8; ++b) {
      for (std::size_t d = b + 1; d < 8; ++d) {
        const std::vector<std::size_t> s{a, b, d};
        double rel = 0.0;
        for (std::size_t i : s) rel += std::log(c.r[i] * c.r[i]);
        const double v =
            0.3 * rel + 0.7 * std::log(testing::elimination_det(testing::sub_matrix(kw, s)));
        if (v > oracle_best) {
          oracle_best = v;
          oracle_subset = s;
        }
      }
    }
  }
  EXPECT_EQ(best.subset, oracle_subset);
  EXPECT_NEAR(best.objective, oracle_best, 1e-10);
}

TEST(Exhaustive, KOneAndBetaOneMatchGreedy) {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = random_case(rng, 12, 16);
    const DppKernel kernel =
        build_kernel(build_weighted_similarity(c.k_sim, c.conflict, 1.5), c.r);
    for (const auto& config : {make_config(0.4, 1, 12), make_config(1.0, 4, 12)}) {
      auto greedy = greedy_select(kernel, config).selected;
      std::sort(greedy.begin(), greedy.end());
      EXPECT_EQ(greedy, exhaustive_best_subset(kernel, config).subset);
    }
  }
}

TEST(Exhaustive, BudgetAndBinomial) {
  EXPECT_EQ(binomial(12, 4), 495u);
  EXPECT_EQ(binomial(5, 0), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(1000, 500), UINT64_MAX);
  const DppKernel kernel = build_kernel(Matrix::Identity(30, 30), Vector::Constant(30, 0.5));
  try {
    exhaustive_best_subset(kernel, make_config(0.5, 10, 30));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
}

}  // namespace
}  // namespace smart
