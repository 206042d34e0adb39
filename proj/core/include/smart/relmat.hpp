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

// Relation structures over a candidate pool: textual similarity between
// sentences, symmetrized NLI conflict, and query relevance.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace smart {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relevance scores are clamped into [kRelevanceFloor, 1] so that
// Diag(r) K Diag(r) keeps its sign pattern and log(r^2) stays finite.
inline constexpr double kRelevanceFloor = 1e-6;

// Tolerance on the unit norm of a normalized embedding.
inline constexpr double kUnitNormTolerance = 1e-9;

// A dense sentence or query representation. Always non-empty and finite.
class Embedding {
 public:
  explicit Embedding(std::vector<double> values);
  explicit Embedding(Vector values);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.size()); }
  const Vector& values() const noexcept { return values_; }
  double norm() const { return values_.norm(); }

  // L2-normalized copy. Throws DegenerateEmbedding for the zero vector.
  Embedding normalized() const;

  friend bool operator==(const Embedding& a, const Embedding& b) {
    return a.values_ == b.values_;
  }

 private:
  Vector values_;
};

double cosine_similarity(const Embedding& a, const Embedding& b);

// M[i][j] = cosine(e_i, e_j), unit diagonal, exactly symmetric.
Matrix build_similarity_matrix(std::span<const Embedding> embeddings);

// Conflict matrix that is symmetric, zero on the diagonal and bounded in
// [0, 1]. Only symmetrize_conflict() and from_symmetric() create one, so a raw
// directional NLI matrix cannot reach the kernel by accident.
class ConflictMatrix {
 public:
  // Validates an already-symmetric matrix (e.g. one loaded from a dump).
  static ConflictMatrix from_symmetric(const Matrix& m, double tol = 1e-12);

  static ConflictMatrix zeros(std::size_t n);

  const Matrix& matrix() const noexcept { return m_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  friend ConflictMatrix symmetrize_conflict(const Matrix& directional);
  explicit ConflictMatrix(Matrix m) : m_(std::move(m)) {}

  Matrix m_;
};

// C[i][j] = (P(i->j) + P(j->i)) / 2 with a zero diagonal. Entries of
// `directional` outside [0, 1] raise InvalidProbability with their indices.
ConflictMatrix symmetrize_conflict(const Matrix& directional);

// r[i] = cosine(query, context_i) clamped to [floor, 1].
Vector query_relevance(const Embedding& query, std::span<const Embedding> contexts,
                       double floor = kRelevanceFloor);

// The three relation structures for one query's candidate pool.
struct RelationMatrices {
  Matrix k_sim;
  ConflictMatrix conflict;
  Vector relevance;

  // Checks shapes and the invariants of each field; throws on violation.
  void validate() const;
  std::size_t size() const noexcept { return static_cast<std::size_t>(k_sim.rows()); }
};

RelationMatrices build_relations(const Embedding& query,
                                 std::span<const Embedding> contexts,
                                 const Matrix& directional_conflict);

// Largest |M - M^T| entry.
double max_asymmetry(const Matrix& m);

}  // namespace smart
