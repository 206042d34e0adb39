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

#include "smart/relmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "smart/error.hpp"

namespace smart {
namespace {

void check_finite_nonempty(const Vector& v) {
  if (v.size() == 0) {
    throw Error(ErrorCode::kInvalidInput, "embedding must have dim >= 1");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorCode::kNumericalError,
                  "embedding entry " + std::to_string(i) + " is not finite",
                  {static_cast<std::size_t>(i)});
    }
  }
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

std::vector<Vector> normalized_rows(std::span<const Embedding> embeddings) {
  std::vector<Vector> rows;
  rows.reserve(embeddings.size());
  const std::size_t dim = embeddings.empty() ? 0 : embeddings.front().dim();
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    if (embeddings[i].dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding " + std::to_string(i) + " has dim " +
                      std::to_string(embeddings[i].dim()) + ", expected " +
                      std::to_string(dim),
                  {i});
    }
    const double norm = embeddings[i].norm();
    if (!(norm > 0.0)) {
      throw Error(ErrorCode::kDegenerateEmbedding,
                  "embedding " + std::to_string(i) + " has zero norm", {i});
    }
    rows.push_back(embeddings[i].values() / norm);
  }
  return rows;
}

std::string index_pair(Eigen::Index i, Eigen::Index j) {
  std::ostringstream os;
  os << "[" << i << "][" << j << "]";
  return os.str();
}

}  // namespace

Embedding::Embedding(std::vector<double> values)
    : values_(Eigen::Map<const Vector>(values.data(),
                                       static_cast<Eigen::Index>(values.size()))) {
  check_finite_nonempty(values_);
}

Embedding::Embedding(Vector values) : values_(std::move(values)) {
  check_finite_nonempty(values_);
}

Embedding Embedding::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) {
    throw Error(ErrorCode::kDegenerateEmbedding, "cannot normalize a zero vector");
  }
  return Embedding(Vector(values_ / n));
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine_similarity: dim " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0)) throw Error(ErrorCode::kDegenerateEmbedding, "first vector has zero norm", {0});
  if (!(nb > 0.0)) throw Error(ErrorCode::kDegenerateEmbedding, "second vector has zero norm", {1});
  return clamp_unit(a.values().dot(b.values()) / (na * nb));
}

Matrix build_similarity_matrix(std::span<const Embedding> embeddings) {
  if (embeddings.empty()) {
    throw Error(ErrorCode::kInvalidInput, "build_similarity_matrix: empty pool");
  }
  const auto rows = normalized_rows(embeddings);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) m(i, j) = clamp_unit(rows[i].dot(rows[j]));
    }
  }
  Matrix sym = 0.5 * (m + m.transpose());
  sym.diagonal().setOnes();
  return sym;
}

ConflictMatrix symmetrize_conflict(const Matrix& directional) {
  if (directional.rows() != directional.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "directional conflict matrix must be square");
  }
  const Eigen::Index n = directional.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double p = directional(i, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kInvalidProbability,
                    "conflict probability " + index_pair(i, j) + " = " +
                        std::to_string(p) + " is outside [0, 1]",
                    {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
      }
    }
  }
  Matrix c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 0.5 * (directional(i, j) + directional(j, i));
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return ConflictMatrix(std::move(c));
}

ConflictMatrix ConflictMatrix::from_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "conflict matrix must be square");
  }
  if (max_asymmetry(m) > tol) {
    throw Error(ErrorCode::kAsymmetry, "conflict matrix is not symmetric");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "conflict diagonal " + index_pair(i, i) + " must be 0",
                  {static_cast<std::size_t>(i), static_cast<std::size_t>(i)});
    }
  }
  // Averaging an (already symmetric) matrix with itself is a no-op on valid
  // input and also range-checks every entry.
  return symmetrize_conflict(m);
}

ConflictMatrix ConflictMatrix::zeros(std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  return ConflictMatrix(Matrix::Zero(dim, dim));
}

Vector query_relevance(const Embedding& query, std::span<const Embedding> contexts,
                       double floor) {
  const double qn = query.norm();
  if (!(qn > 0.0)) {
    throw Error(ErrorCode::kDegenerateEmbedding, "query embedding has zero norm");
  }
  const Vector q = query.values() / qn;
  const auto rows = normalized_rows(contexts);
  Vector r(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != q.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "context " + std::to_string(i) + " dim differs from query", {i});
    }
    r[static_cast<Eigen::Index>(i)] = std::clamp(q.dot(rows[i]), floor, 1.0);
  }
  return r;
}

void RelationMatrices::validate() const {
  const Eigen::Index n = k_sim.rows();
  if (k_sim.cols() != n || static_cast<Eigen::Index>(conflict.size()) != n ||
      relevance.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "relation matrices disagree on pool size");
  }
  if (max_asymmetry(k_sim) > 1e-12) {
    throw Error(ErrorCode::kAsymmetry, "k_sim is not symmetric");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (k_sim(i, i) != 1.0) {
      throw Error(ErrorCode::kInvalidInput, "k_sim diagonal must be 1",
                  {static_cast<std::size_t>(i)});
    }
    if (!(relevance[i] >= kRelevanceFloor && relevance[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidInput,
                  "relevance " + std::to_string(i) + " is outside [1e-6, 1]",
                  {static_cast<std::size_t>(i)});
    }
  }
}

RelationMatrices build_relations(const Embedding& query,
                                 std::span<const Embedding> contexts,
                                 const Matrix& directional_conflict) {
  RelationMatrices rel{build_similarity_matrix(contexts),
                       symmetrize_conflict(directional_conflict),
                       query_relevance(query, contexts)};
  rel.validate();
  return rel;
}

double max_asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace smart
