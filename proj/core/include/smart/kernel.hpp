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

// DPP kernel construction and spectral utilities.
//
//   K_weighted[i][j] = K_sim[i][j] * exp(-gamma * (1 - C[i][j]))   (i != j)
//   K_weighted[i][i] = K_sim[i][i]
//   L = Diag(r) * K_weighted * Diag(r)

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "smart/relmat.hpp"

namespace smart {

inline constexpr double kDefaultPsdTolerance = 1e-8;

// Tolerance on |M - M^T| accepted by spectral_check.
inline constexpr double kSymmetryTolerance = 1e-9;

// A Cholesky pivot must exceed this fraction of the largest diagonal entry of
// the factored matrix; anything at or below it is treated as singular.
inline constexpr double kRelativePivotFloor = 1e-12;

struct SpectralReport {
  double min_eigenvalue = 0.0;
  bool is_psd = true;
  double tol_psd = kDefaultPsdTolerance;
};

// Smallest eigenvalue of a symmetric matrix. Throws AsymmetryError when
// |M - M^T| exceeds kSymmetryTolerance anywhere.
SpectralReport spectral_check(const Matrix& m, double tol_psd = kDefaultPsdTolerance);

// Eigenvalues of an arbitrary square matrix, sorted by descending real part.
// Used for directional conflict matrices, which need not be symmetric.
std::vector<std::complex<double>> general_eigenvalues(const Matrix& m);

// Smallest real part over the spectrum of an arbitrary square matrix.
double min_real_eigenvalue(const Matrix& m);

// Like spectral_check() but accepts asymmetric input, which is never PSD;
// min_eigenvalue is then the smallest real part of the spectrum.
SpectralReport spectral_check_any(const Matrix& m, double tol_psd = kDefaultPsdTolerance);

// Off-diagonal decay by conflict; the diagonal keeps K_sim's self-similarity.
Matrix build_weighted_similarity(const Matrix& k_sim, const ConflictMatrix& conflict,
                                 double gamma);

// Diagonal shifts tried, in order, when a Cholesky factorization fails.
struct JitterPolicy {
  std::vector<double> ladder{1e-10, 1e-8, 1e-6};

  static JitterPolicy none() { return JitterPolicy{{}}; }
};

class DppKernel {
 public:
  DppKernel(Matrix k_weighted, Vector relevance, double gamma,
            JitterPolicy policy = {});

  std::size_t size() const noexcept { return static_cast<std::size_t>(l_.rows()); }
  const Matrix& k_weighted() const noexcept { return k_weighted_; }
  const Matrix& l() const noexcept { return l_; }
  const Vector& relevance() const noexcept { return relevance_; }
  double gamma() const noexcept { return gamma_; }
  const JitterPolicy& jitter_policy() const noexcept { return policy_; }

  // Diagonal shift that made the full L factorizable: 0 when L is already
  // positive definite, empty when even the last rung of the ladder failed.
  std::optional<double> jitter() const noexcept { return jitter_; }

  // log det(L + I); finite for any PSD L.
  double log_det_l_plus_identity() const noexcept { return log_det_l_plus_i_; }

 private:
  Matrix k_weighted_;
  Matrix l_;
  Vector relevance_;
  double gamma_;
  JitterPolicy policy_;
  std::optional<double> jitter_;
  double log_det_l_plus_i_;
};

// Validates shapes and finiteness, then forms L.
DppKernel build_kernel(const Matrix& k_weighted, const Vector& relevance,
                       double gamma = 0.0, JitterPolicy policy = {});

// Convenience: weighted similarity followed by build_kernel.
DppKernel build_kernel(const RelationMatrices& relations, double gamma,
                       JitterPolicy policy = {});

// log det via Cholesky, 2 * sum(log diag). Empty matrices give 0. Returns
// nullopt when a pivot falls to kRelativePivotFloor or below.
std::optional<double> cholesky_log_det(const Matrix& m);

struct LogDet {
  double value = 0.0;   // -inf marks a singular submatrix
  double jitter = 0.0;  // diagonal shift used to obtain `value`

  bool singular() const noexcept;
};

// Principal submatrix m[subset, subset] in the order given.
Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> subset);

// log det of L[subset]. Retries with the kernel's jitter ladder; when every
// rung fails the result is -inf (the SingularSubmatrix signal).
LogDet subset_log_det(const DppKernel& kernel, std::span<const std::size_t> subset);

// log P(subset) = sum log r_i^2 + log det K_weighted[subset] - log det(L + I).
double subset_log_probability(const DppKernel& kernel,
                              std::span<const std::size_t> subset);

// Throws InvalidInput unless indices are distinct and below n.
void validate_subset(std::span<const std::size_t> subset, std::size_t n);

}  // namespace smart
