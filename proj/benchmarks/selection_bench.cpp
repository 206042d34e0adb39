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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "smart/kernel.hpp"
#include "smart/relmat.hpp"
#include "smart/selector.hpp"

namespace {

smart::RelationMatrices random_relations(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<smart::Embedding> embeddings;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = gauss(rng);
    embeddings.emplace_back(v);
  }
  smart::Matrix p = smart::Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) p(i, j) = unit(rng);
    }
  }
  smart::Vector r(static_cast<Eigen::Index>(n));
  for (auto& x : r) x = 0.05 + 0.95 * unit(rng);
  return {smart::build_similarity_matrix(embeddings), smart::symmetrize_conflict(p), r};
}

void BM_BuildKernel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rel = random_relations(n, 256, 1);
  for (auto _ : state) benchmark::DoNotOptimize(smart::build_kernel(rel, 0.8));
}
BENCHMARK(BM_BuildKernel)->Arg(10)->Arg(30)->Arg(100);

void BM_GreedyIncremental(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kernel = smart::build_kernel(random_relations(n, 256, 2), 0.8);
  smart::SelectionConfig config;
  config.k = static_cast<std::size_t>(state.range(1));
  config.m = n;
  for (auto _ : state) benchmark::DoNotOptimize(smart::greedy_select(kernel, config));
}
BENCHMARK(BM_GreedyIncremental)->Args({30, 5})->Args({30, 10})->Args({100, 20});

void BM_GreedyNaive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kernel = smart::build_kernel(random_relations(n, 256, 2), 0.8);
  smart::SelectionConfig config;
  config.k = static_cast<std::size_t>(state.range(1));
  config.m = n;
  for (auto _ : state) benchmark::DoNotOptimize(smart::naive_greedy_select(kernel, config));
}
BENCHMARK(BM_GreedyNaive)->Args({30, 5})->Args({30, 10})->Args({100, 20});

// The default beta x gamma grid over one prepared pool, as the sweep command
// runs it.
void BM_SweepGrid(benchmark::State& state) {
  const auto rel = random_relations(30, 256, 3);
  const double betas[] = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const double gammas[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  for (auto _ : state) {
    for (double g : gammas) {
      const auto kernel = smart::build_kernel(rel, g);
      for (double b : betas) {
        smart::SelectionConfig config;
        config.beta = b;
        config.gamma = g;
        benchmark::DoNotOptimize(smart::greedy_select(kernel, config));
      }
    }
  }
}
BENCHMARK(BM_SweepGrid);

void BM_Exhaustive(benchmark::State& state) {
  const auto kernel = smart::build_kernel(random_relations(12, 64, 4), 0.8);
  smart::SelectionConfig config;
  config.k = 4;
  for (auto _ : state) benchmark::DoNotOptimize(smart::exhaustive_best_subset(kernel, config));
}
BENCHMARK(BM_Exhaustive);

}  // namespace
BENCHMARK_MAIN();
