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

#include "smart/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "smart/error.hpp"

namespace smart {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_finite(const Matrix& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j))) {
        throw Error(ErrorCode::kNumericalError,
                    std::string(what) + " has a non-finite entry",
                    {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
      }
    }
  }
}

std::optional<double> first_factorizable_shift(const Matrix& m,
                                               const JitterPolicy& policy) {
  if (cholesky_log_det(m)) return 0.0;
  const auto n = m.rows();
  for (double delta : policy.ladder) {
    if (cholesky_log_det(m + delta * Matrix::Identity(n, n))) return delta;
  }
  return std::nullopt;
}

LogDet jittered_log_det(const Matrix& m, const JitterPolicy& policy) {
  if (auto v = cholesky_log_det(m)) return {*v, 0.0};
  const auto n = m.rows();
  for (double delta : policy.ladder) {
    if (auto v = cholesky_log_det(m + delta * Matrix::Identity(n, n))) {
      return {*v, delta};
    }
  }
  return {kNegInf, policy.ladder.empty() ? 0.0 : policy.ladder.back()};
}

}  // namespace

SpectralReport spectral_check(const Matrix& m, double tol_psd) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "spectral_check needs a square matrix");
  }
  if (!(tol_psd >= 0.0)) {
    throw Error(ErrorCode::kInvalidHyperparameter, "tol_psd must be >= 0");
  }
  if (max_asymmetry(m) > kSymmetryTolerance) {
    throw Error(ErrorCode::kAsymmetry, "spectral_check: matrix is not symmetric");
  }
  SpectralReport report;
  report.tol_psd = tol_psd;
  if (m.rows() == 0) return report;
  require_finite(m, "spectral_check input");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalError, "symmetric eigensolver did not converge");
  }
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.is_psd = report.min_eigenvalue >= -tol_psd;
  return report;
}

std::vector<std::complex<double>> general_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "eigenvalues need a square matrix");
  }
  require_finite(m, "eigenvalue input");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalError, "eigensolver did not converge");
  }
  std::vector<std::complex<double>> values(solver.eigenvalues().begin(),
                                           solver.eigenvalues().end());
  std::sort(values.begin(), values.end(),
            [](const auto& a, const auto& b) { return a.real() > b.real(); });
  return values;
}

double min_real_eigenvalue(const Matrix& m) {
  const auto values = general_eigenvalues(m);
  if (values.empty()) return 0.0;
  return values.back().real();
}

SpectralReport spectral_check_any(const Matrix& m, double tol_psd) {
  if (m.rows() == m.cols() && max_asymmetry(m) <= kSymmetryTolerance) {
    return spectral_check(m, tol_psd);
  }
  return SpectralReport{min_real_eigenvalue(m), false, tol_psd};
}

Matrix build_weighted_similarity(const Matrix& k_sim, const ConflictMatrix& conflict,
                                 double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidHyperparameter,
                "gamma must be a finite value >= 0, got " + std::to_string(gamma));
  }
  const Matrix& c = conflict.matrix();
  if (k_sim.rows() != k_sim.cols() || k_sim.rows() != c.rows()) {
    throw Error(ErrorCode::kShapeMismatch,
                "k_sim and conflict must be square matrices of the same size");
  }
  if (max_asymmetry(k_sim) > kSymmetryTolerance) {
    throw Error(ErrorCode::kAsymmetry, "k_sim is not symmetric");
  }
  const Eigen::Index n = k_sim.rows();
  Matrix w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i, i) = k_sim(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = k_sim(i, j) * std::exp(-gamma * (1.0 - c(i, j)));
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return w;
}

DppKernel::DppKernel(Matrix k_weighted, Vector relevance, double gamma,
                     JitterPolicy policy)
    : k_weighted_(std::move(k_weighted)),
      relevance_(std::move(relevance)),
      gamma_(gamma),
      policy_(std::move(policy)) {
  const Eigen::Index n = k_weighted_.rows();
  if (k_weighted_.cols() != n || relevance_.size() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                "k_weighted must be n x n and relevance of length n");
  }
  if (!(gamma_ >= 0.0) || !std::isfinite(gamma_)) {
    throw Error(ErrorCode::kInvalidHyperparameter, "gamma must be >= 0");
  }
  for (double delta : policy_.ladder) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
      throw Error(ErrorCode::kInvalidHyperparameter, "jitter rungs must be positive");
    }
  }
  require_finite(k_weighted_, "k_weighted");
  if (max_asymmetry(k_weighted_) > kSymmetryTolerance) {
    throw Error(ErrorCode::kAsymmetry, "k_weighted is not symmetric");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = relevance_[i];
    if (!std::isfinite(r)) {
      throw Error(ErrorCode::kNumericalError, "relevance has a non-finite entry",
                  {static_cast<std::size_t>(i)});
    }
    if (!(r > 0.0 && r <= 1.0)) {
      throw Error(ErrorCode::kInvalidInput,
                  "relevance " + std::to_string(i) + " must lie in (0, 1]",
                  {static_cast<std::size_t>(i)});
    }
  }

  l_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = relevance_[i] * k_weighted_(i, j) * relevance_[j];
      l_(i, j) = v;
      l_(j, i) = v;
    }
  }

  jitter_ = first_factorizable_shift(l_, policy_);
  const auto l_plus_i = cholesky_log_det(l_ + Matrix::Identity(n, n));
  log_det_l_plus_i_ = l_plus_i ? *l_plus_i : std::numeric_limits<double>::quiet_NaN();
}

DppKernel build_kernel(const Matrix& k_weighted, const Vector& relevance, double gamma,
                       JitterPolicy policy) {
  return DppKernel(k_weighted, relevance, gamma, std::move(policy));
}

DppKernel build_kernel(const RelationMatrices& relations, double gamma,
                       JitterPolicy policy) {
  relations.validate();
  return DppKernel(build_weighted_similarity(relations.k_sim, relations.conflict, gamma),
                   relations.relevance, gamma, std::move(policy));
}

std::optional<double> cholesky_log_det(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  const double floor = kRelativePivotFloor * std::max(m.diagonal().maxCoeff(), 0.0);
  Matrix factor = Matrix::Zero(n, n);
  double log_det = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= factor(j, k) * factor(j, k);
    if (!(pivot > floor)) return std::nullopt;
    const double d = std::sqrt(pivot);
    factor(j, j) = d;
    log_det += std::log(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= factor(i, k) * factor(j, k);
      factor(i, j) = s / d;
    }
  }
  return log_det;
}

bool LogDet::singular() const noexcept { return value == kNegInf; }

Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> subset) {
  const auto k = static_cast<Eigen::Index>(subset.size());
  Matrix sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      sub(a, b) = m(static_cast<Eigen::Index>(subset[a]),
                    static_cast<Eigen::Index>(subset[b]));
    }
  }
  return sub;
}

void validate_subset(std::span<const std::size_t> subset, std::size_t n) {
  std::vector<bool> seen(n, false);
  for (std::size_t idx : subset) {
    if (idx >= n) {
      throw Error(ErrorCode::kInvalidInput,
                  "subset index " + std::to_string(idx) + " out of range for n = " +
                      std::to_string(n),
                  {idx});
    }
    if (seen[idx]) {
      throw Error(ErrorCode::kInvalidInput,
                  "subset index " + std::to_string(idx) + " repeated", {idx});
    }
    seen[idx] = true;
  }
}

LogDet subset_log_det(const DppKernel& kernel, std::span<const std::size_t> subset) {
  validate_subset(subset, kernel.size());
  return jittered_log_det(principal_submatrix(kernel.l(), subset),
                          kernel.jitter_policy());
}

double subset_log_probability(const DppKernel& kernel,
                              std::span<const std::size_t> subset) {
  validate_subset(subset, kernel.size());
  const double norm = kernel.log_det_l_plus_identity();
  if (!std::isfinite(norm)) {
    throw Error(ErrorCode::kNumericalError, "det(L + I) is not positive; L is not PSD");
  }
  const LogDet k_part = jittered_log_det(principal_submatrix(kernel.k_weighted(), subset),
                                         kernel.jitter_policy());
  if (k_part.singular()) return kNegInf;
  double log_p = k_part.value - norm;
  for (std::size_t i : subset) {
    const double r = kernel.relevance()[static_cast<Eigen::Index>(i)];
    log_p += std::log(r * r);
  }
  return log_p;
}

}  // namespace smart
