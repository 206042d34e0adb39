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

#include "smart/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "smart/error.hpp"

namespace smart::verify {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kPsdTrials = 500;
constexpr std::size_t kMonotonicityTrials = 100;
constexpr std::size_t kNormalizationTrials = 50;
constexpr std::size_t kGreedyTrials = 200;
constexpr std::size_t kCollapseTrials = 100;
constexpr std::size_t kExhaustiveTrials = 50;
constexpr double kMaxGamma = 5.0;

std::mt19937_64 suite_rng(const VerifyOptions& options, std::string_view name) {
  // FNV-1a over the suite name keeps suites independent of each other's draws.
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return std::mt19937_64(options.seed ^ h);
}

std::size_t uniform_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix weigh(const VerifyOptions& options, const Matrix& k_sim, const ConflictMatrix& c,
             double gamma) {
  return options.weighting ? options.weighting(k_sim, c, gamma)
                           : build_weighted_similarity(k_sim, c, gamma);
}

struct Instance {
  Matrix k_sim;
  ConflictMatrix conflict = ConflictMatrix::zeros(0);
  Vector relevance;
  double gamma = 0.0;
};

Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  Instance inst;
  const auto embeddings = random_embeddings(rng, n, dim);
  inst.k_sim = build_similarity_matrix(embeddings);
  inst.conflict = symmetrize_conflict(random_directional_conflict(rng, n));
  inst.relevance = random_relevance(rng, n);
  inst.gamma = uniform_real(rng, 0.0, kMaxGamma);
  return inst;
}

DppKernel kernel_for(const VerifyOptions& options, const Instance& inst) {
  return DppKernel(weigh(options, inst.k_sim, inst.conflict, inst.gamma), inst.relevance,
                   inst.gamma);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

 private:
  Clock::time_point start_ = Clock::now();
};

SuiteResult named(std::string name, std::string group) {
  SuiteResult r;
  r.name = std::move(name);
  r.group = std::move(group);
  return r;
}

SuiteResult finish(SuiteResult r, const Stopwatch& watch, const std::string& detail) {
  r.seconds = watch.seconds();
  r.passed = r.failures == 0;
  r.detail = detail;
  return r;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::vector<Embedding> random_embeddings(std::mt19937_64& rng, std::size_t n,
                                         std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Embedding> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector v(static_cast<Eigen::Index>(dim));
    do {
      for (auto& x : v) x = gauss(rng);
    } while (v.norm() == 0.0);
    out.emplace_back(std::move(v));
  }
  return out;
}

Matrix random_directional_conflict(std::mt19937_64& rng, std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix p = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j) p(i, j) = uniform_real(rng, 0.0, 1.0);
    }
  }
  return p;
}

Vector random_relevance(std::mt19937_64& rng, std::size_t n) {
  Vector r(static_cast<Eigen::Index>(n));
  for (auto& x : r) x = uniform_real(rng, 0.05, 1.0);
  return r;
}

SuiteResult similarity_psd_suite(const VerifyOptions& options) {
  Stopwatch watch;
  SuiteResult r = named("similarity_psd", "psd");
  auto rng = suite_rng(options, r.name);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < kPsdTrials; ++t) {
    const std::size_t n = uniform_size(rng, 1, 40);
    const std::size_t dim = uniform_size(rng, 1, 64);
    const auto report = spectral_check(build_similarity_matrix(random_embeddings(rng, n, dim)));
    worst = std::min(worst, report.min_eigenvalue);
    ++r.trials;
    if (!report.is_psd) ++r.failures;
  }
  std::ostringstream detail;
  detail << "worst min eigenvalue " << worst;
  return finish(r, watch, detail.str());
}

SuiteResult conflict_fixture_suite(const VerifyOptions& options) {
  (void)options;
  Stopwatch watch;
  SuiteResult r = named("conflict_fixtures", "psd");
  struct Fixture {
    Matrix m;
    std::array<double, 3> expected;  // descending
  };
  Matrix directional(3, 3);
  directional << 0.0, 0.8, 0.7, 0.8, 0.0, 0.9, 0.7, 0.8, 0.0;
  Matrix symmetrized(3, 3);
  symmetrized << 0.0, 0.7, 0.6, 0.7, 0.0, 0.85, 0.6, 0.85, 0.0;
  const std::array<Fixture, 2> fixtures{Fixture{directional, {1.568, -0.7, -0.868}},
                                        Fixture{symmetrized, {1.438, -0.575, -0.864}}};
  std::ostringstream detail;
  for (const auto& f : fixtures) {
    ++r.trials;
    const auto values = general_eigenvalues(f.m);
    const auto report = spectral_check_any(f.m);
    bool ok = values.size() == 3 && report.min_eigenvalue < 0.0 && !report.is_psd;
    for (std::size_t i = 0; ok && i < 3; ++i) {
      ok = std::abs(values[i].real() - f.expected[i]) <= 1e-2 &&
           std::abs(values[i].imag()) <= 1e-2;
    }
    if (!ok) ++r.failures;
    detail << "min eigenvalue " << report.min_eigenvalue << (ok ? " ok; " : " MISMATCH; ");
  }
  return finish(r, watch, detail.str());
}

SuiteResult weighted_psd_suite(const VerifyOptions& options) {
  Stopwatch watch;
  SuiteResult r = named("weighted_psd", "psd");
  auto rng = suite_rng(options, r.name);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < kPsdTrials; ++t) {
    // Pools no larger than the embedding dimension, as with real encoders
    // (hundreds of dimensions against a pool of a few dozen sentences).
    const std::size_t n = uniform_size(rng, 2, 30);
    const std::size_t dim = uniform_size(rng, n, 64);
    const Instance inst = random_instance(rng, n, dim);
    const DppKernel kernel = kernel_for(options, inst);
    const auto kw = spectral_check(kernel.k_weighted());
    const auto l = spectral_check(kernel.l());
    worst = std::min(worst, kw.min_eigenvalue);
    ++r.trials;
    if (!kw.is_psd || !l.is_psd) ++r.failures;
  }

  // Rank-deficient similarity (fewer dimensions than sentences) is outside
  // what the construction can promise; report how often it breaks.
  std::size_t deficient_failures = 0;
  for (std::size_t t = 0; t < kPsdTrials; ++t) {
    const std::size_t n = uniform_size(rng, 3, 30);
    const std::size_t dim = uniform_size(rng, 1, n - 1);
    const Instance inst = random_instance(rng, n, dim);
    if (!spectral_check(weigh(options, inst.k_sim, inst.conflict, inst.gamma)).is_psd) {
      ++deficient_failures;
    }
  }
  std::ostringstream detail;
  detail << "worst min eigenvalue " << worst << "; rank-deficient diagnostic "
         << deficient_failures << "/" << kPsdTrials << " not PSD";
  return finish(r, watch, detail.str());
}

SuiteResult monotonicity_suite(const VerifyOptions& options) {
  Stopwatch watch;
  SuiteResult r = named("conflict_monotonicity", "monotonicity");
  auto rng = suite_rng(options, r.name);
  std::size_t violations = 0;
  for (std::size_t t = 0; t < kMonotonicityTrials; ++t) {
    const std::size_t n = uniform_size(rng, 2, 8);
    const std::size_t dim = uniform_size(rng, n, 16);
    Instance inst = random_instance(rng, n, dim);
    std::size_t i = uniform_size(rng, 0, n - 1);
    std::size_t j = uniform_size(rng, 0, n - 2);
    if (j >= i) ++j;
    const std::array<std::size_t, 2> pair{std::min(i, j), std::max(i, j)};
    Matrix c = inst.conflict.matrix();

    bool instance_ok = true;
    double previous = std::numeric_limits<double>::infinity();
    for (int step = 0; step <= 10; ++step) {
      const double value = step / 10.0;
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
      c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
      const DppKernel kernel(weigh(options, inst.k_sim, ConflictMatrix::from_symmetric(c),
                                   inst.gamma),
                             inst.relevance, inst.gamma);
      const double current = subset_log_det(kernel, pair).value;
      // Rounding slack only; a real increase is many orders larger.
      const double slack = 1e-12 * std::max(1.0, std::abs(previous));
      if (std::isfinite(previous) ? current > previous + slack : false) {
        ++violations;
        instance_ok = false;
      }
      previous = current;
    }
    ++r.trials;
    if (!instance_ok) ++r.failures;
  }
  std::ostringstream detail;
  detail << violations << " grid violations over " << kMonotonicityTrials << " x 11 points";
  return finish(r, watch, detail.str());
}

SuiteResult normalization_suite(const VerifyOptions& options) {
  Stopwatch watch;
  SuiteResult r = named("dpp_normalization", "normalization");
  auto rng = suite_rng(options, r.name);
  double worst = 0.0;
  for (std::size_t t = 0; t < kNormalizationTrials; ++t) {
    const std::size_t n = uniform_size(rng, 1, 10);
    const std::size_t dim = uniform_size(rng, n, n + 8);
    const DppKernel kernel = kernel_for(options, random_instance(rng, n, dim));
    double total = 0.0;
    std::vector<std::size_t> subset;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      subset.clear();
      for (std::size_t b = 0; b < n; ++b) {
        if (mask & (1u << b)) subset.push_back(b);
      }
      total += std::exp(subset_log_probability(kernel, subset));
    }
    worst = std::max(worst, std::abs(total - 1.0));
    ++r.trials;
    if (!(std::abs(total - 1.0) <= 1e-8)) ++r.failures;
  }
  std::ostringstream detail;
  detail << "max |sum - 1| = " << worst;
  return finish(r, watch, detail.str());
}

SuiteResult greedy_equivalence_suite(const VerifyOptions& options) {
  Stopwatch watch;
  SuiteResult r = named("greedy_naive_equivalence", "greedy");
  auto rng = suite_rng(options, r.name);
  double worst_gain = 0.0;
  std::size_t singular_stops = 0;
  for (std::size_t t = 0; t < kGreedyTrials; ++t) {
    const std::size_t n = uniform_size(rng, 1, 30);
    // Low dimensions make rank-deficient pools, exercising the singular path.
    const std::size_t dim = uniform_size(rng, 1, 48);
    Instance inst = random_instance(rng, n, dim);
    // Without decay the kernel keeps the similarity's rank, which drives
    // greedy into singular candidates once the selection spans it.
    if (t % 4 == 0) inst.gamma = 0.0;
    const DppKernel kernel = kernel_for(options, inst);
    SelectionConfig config;
    config.k = uniform_size(rng, 1, 10);
    config.m = std::max(config.k, n);
    config.beta = uniform_real(rng, 0.0, 1.0);
    config.gamma = kernel.gamma();
    const auto fast = greedy_select(kernel, config);
    const auto slow = naive_greedy_select(kernel, config);
    bool ok = fast.selected == slow.selected && fast.gains.size() == slow.gains.size() &&
              fast.stop_reason == slow.stop_reason;
    for (std::size_t s = 0; ok && s < fast.gains.size(); ++s) {
      const double diff = std::abs(fast.gains[s] - slow.gains[s]);
      worst_gain = std::max(worst_gain, diff);
      ok = diff <= 1e-9;
    }
    if (fast.stop_reason == StopReason::kAllCandidatesSingular) ++singular_stops;
    ++r.trials;
    if (!ok) ++r.failures;
  }
  std::ostringstream detail;
  detail << "max gain difference " << worst_gain << "; " << singular_stops
         << " runs stopped on singular candidates";
  return finish(r, watch, detail.str());
}

SuiteResult beta_collapse_suite(const VerifyOptions& options) {
  Stopwatch watch;
  SuiteResult r = named("beta_one_collapse", "collapse");
  auto rng = suite_rng(options, r.name);
  for (std::size_t t = 0; t < kCollapseTrials; ++t) {
    const std::size_t n = uniform_size(rng, 1, 30);
    const std::size_t dim = uniform_size(rng, 1, 48);
    const DppKernel kernel = kernel_for(options, random_instance(rng, n, dim));
    SelectionConfig config;
    config.beta = 1.0;
    config.k = uniform_size(rng, 1, std::min<std::size_t>(n, 10));
    config.m = n;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return kernel.relevance()[static_cast<Eigen::Index>(a)] >
             kernel.relevance()[static_cast<Eigen::Index>(b)];
    });
    order.resize(config.k);
    ++r.trials;
    if (greedy_select(kernel, config).selected != order) ++r.failures;
  }
  return finish(r, watch, "greedy at beta = 1 against relevance argsort");
}

SuiteResult gamma_collapse_suite(const VerifyOptions& options) {
  Stopwatch watch;
  SuiteResult r = named("gamma_zero_collapse", "collapse");
  auto rng = suite_rng(options, r.name);
  for (std::size_t t = 0; t < kCollapseTrials; ++t) {
    const std::size_t n = uniform_size(rng, 1, 30);
    const std::size_t dim = uniform_size(rng, n, 64);
    Instance inst = random_instance(rng, n, dim);
    inst.gamma = 0.0;
    SelectionConfig config;
    config.gamma = 0.0;
    config.beta = uniform_real(rng, 0.0, 1.0);
    config.k = uniform_size(rng, 1, std::min<std::size_t>(n, 10));
    config.m = n;
    const auto with_conflict = greedy_select(kernel_for(options, inst), config);
    const DppKernel conflict_free(inst.k_sim, inst.relevance, 0.0);
    ++r.trials;
    if (with_conflict.selected != greedy_select(conflict_free, config).selected) {
      ++r.failures;
    }
  }
  return finish(r, watch, "gamma = 0 against selection on the raw similarity kernel");
}

SuiteResult exhaustive_gap_suite(const VerifyOptions& options) {
  Stopwatch watch;
  SuiteResult r = named("exhaustive_gap", "exhaustive");
  auto rng = suite_rng(options, r.name);
  constexpr std::size_t n = 12;
  double gap_sum = 0.0;
  double gap_max = 0.0;
  std::size_t optimal_hits = 0;
  std::ostringstream mismatches;
  for (std::size_t t = 0; t < kExhaustiveTrials; ++t) {
    const std::size_t dim = uniform_size(rng, n, 64);
    const DppKernel kernel = kernel_for(options, random_instance(rng, n, dim));
    SelectionConfig config;
    config.m = n;
    config.k = 4;
    config.beta = uniform_real(rng, 0.0, 1.0);
    config.gamma = kernel.gamma();

    const auto greedy = greedy_select(kernel, config);
    const auto best = exhaustive_best_subset(kernel, config);
    const double gap = (best.objective - greedy.objective) / std::abs(best.objective);
    gap_sum += gap;
    gap_max = std::max(gap_max, gap);
    if (gap <= 1e-12) ++optimal_hits;

    // Sub-cases where greedy is provably optimal must agree exactly.
    for (const auto& [beta, k] : {std::pair{1.0, std::size_t{4}}, std::pair{config.beta, std::size_t{1}}}) {
      SelectionConfig sub = config;
      sub.beta = beta;
      sub.k = k;
      auto picked = greedy_select(kernel, sub).selected;
      std::sort(picked.begin(), picked.end());
      const auto exact = exhaustive_best_subset(kernel, sub);
      ++r.trials;
      if (picked != exact.subset || beta_objective(kernel, picked, beta) != exact.objective) {
        ++r.failures;
        mismatches << " [trial " << t << " beta=" << beta << " k=" << k << ": greedy {"
                   << join(picked) << "} vs {" << join(exact.subset) << "}]";
      }
    }
  }
  std::ostringstream detail;
  detail << "n=12 k=4: mean relative gap " << gap_sum / kExhaustiveTrials << ", max "
         << gap_max << ", greedy optimal on " << optimal_hits << "/" << kExhaustiveTrials
         << mismatches.str();
  return finish(r, watch, detail.str());
}

const std::vector<std::string>& suite_groups() {
  static const std::vector<std::string> groups{"psd",    "monotonicity", "normalization",
                                               "greedy", "collapse",     "exhaustive"};
  return groups;
}

std::vector<SuiteResult> run_suites(std::string_view group, const VerifyOptions& options) {
  using Suite = SuiteResult (*)(const VerifyOptions&);
  static const std::vector<std::pair<std::string_view, Suite>> table{
      {"psd", &similarity_psd_suite},
      {"psd", &conflict_fixture_suite},
      {"psd", &weighted_psd_suite},
      {"monotonicity", &monotonicity_suite},
      {"normalization", &normalization_suite},
      {"greedy", &greedy_equivalence_suite},
      {"collapse", &beta_collapse_suite},
      {"collapse", &gamma_collapse_suite},
      {"exhaustive", &exhaustive_gap_suite},
  };
  if (group != "all" &&
      std::find(suite_groups().begin(), suite_groups().end(), group) == suite_groups().end()) {
    throw Error(ErrorCode::kInvalidInput, "unknown suite '" + std::string(group) + "'");
  }
  std::vector<SuiteResult> results;
  for (const auto& [g, fn] : table) {
    if (group != "all" && g != group) continue;
    try {
      results.push_back(fn(options));
    } catch (const std::exception& e) {
      // A suite that throws has failed; report it instead of aborting the run.
      SuiteResult failed;
      failed.group = std::string(g);
      failed.name = failed.group + "_error";
      failed.failures = 1;
      failed.detail = e.what();
      results.push_back(std::move(failed));
    }
  }
  return results;
}

std::string summary_json(const std::vector<SuiteResult>& results) {
  nlohmann::ordered_json doc;
  bool all = true;
  auto suites = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    suites.push_back({{"name", r.name},
                      {"group", r.group},
                      {"passed", r.passed},
                      {"trials", r.trials},
                      {"failures", r.failures},
                      {"seconds", r.seconds},
                      {"detail", r.detail}});
  }
  doc["passed"] = all;
  doc["suites"] = std::move(suites);
  return doc.dump();
}

}  // namespace smart::verify
