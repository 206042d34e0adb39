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

#include <gtest/gtest.h>

#include <random>

#include "../support/oracles.hpp"
#include "smart/error.hpp"

namespace smart {
namespace {

using testing::gaussian_vectors;
using testing::scalar_cosine;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected smart::Error";
  return ErrorCode::kInternal;
}

TEST(Embedding, RejectsEmptyAndNonFinite) {
  EXPECT_EQ(code_of([] { Embedding(std::vector<double>{}); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of([] { Embedding(std::vector<double>{1.0, NAN}); }),
            ErrorCode::kNumericalError);
}

TEST(Embedding, NormalizedHasUnitNorm) {
  const Embedding e(std::vector<double>{3.0, 4.0});
  EXPECT_NEAR(e.normalized().norm(), 1.0, kUnitNormTolerance);
  EXPECT_EQ(code_of([] { Embedding(std::vector<double>{0.0, 0.0}).normalized(); }),
            ErrorCode::kDegenerateEmbedding);
}

TEST(Cosine, IdentityOrthogonalAndHandValue) {
  const Embedding a(std::vector<double>{1, 2, 2});
  const Embedding b(std::vector<double>{2, 1, 2});
  EXPECT_DOUBLE_EQ(cosine_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(Embedding(std::vector<double>{1, 0}),
                                     Embedding(std::vector<double>{0, 1})),
                   0.0);
  // Dot product 8 over norms 3 * 3.
  EXPECT_NEAR(cosine_similarity(a, b), 8.0 / 9.0, 1e-15);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b), cosine_similarity(b, a));
}

TEST(Cosine, Errors) {
  const Embedding zero(std::vector<double>{0, 0});
  const Embedding two(std::vector<double>{1, 0});
  const Embedding three(std::vector<double>{1, 0, 0});
  EXPECT_EQ(code_of([&] { cosine_similarity(zero, two); }), ErrorCode::kDegenerateEmbedding);
  EXPECT_EQ(code_of([&] { cosine_similarity(two, three); }), ErrorCode::kDimensionMismatch);
}

TEST(SimilarityMatrix, SmallCases) {
  const std::vector<Embedding> one{Embedding(std::vector<double>{0.3, -2.0})};
  const Matrix m1 = build_similarity_matrix(one);
  ASSERT_EQ(m1.rows(), 1);
  EXPECT_EQ(m1(0, 0), 1.0);

  const std::vector<Embedding> dup{Embedding(std::vector<double>{1, 2, 3}),
                                   Embedding(std::vector<double>{1, 2, 3})};
  const Matrix m2 = build_similarity_matrix(dup);
  EXPECT_DOUBLE_EQ(m2(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(m2(1, 0), 1.0);
  EXPECT_EQ(m2(0, 0), 1.0);
}

TEST(SimilarityMatrix, MatchesScalarOracleAndIsExactlySymmetric) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto raw = gaussian_vectors(rng, 3 + trial % 5, 7);
    std::vector<Embedding> emb;
    for (const auto& v : raw) emb.emplace_back(v);
    const Matrix m = build_similarity_matrix(emb);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (std::size_t j = 0; j < raw.size(); ++j) {
        const double expected = i == j ? 1.0 : scalar_cosine(raw[i], raw[j]);
        EXPECT_NEAR(m(i, j), expected, 1e-12);
        EXPECT_EQ(m(i, j), m(j, i));
      }
    }
  }
}

TEST(SimilarityMatrix, ReportsDegenerateIndex) {
  const std::vector<Embedding> emb{Embedding(std::vector<double>{1, 0}),
                                   Embedding(std::vector<double>{0, 0})};
  try {
    build_similarity_matrix(emb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateEmbedding);
    ASSERT_FALSE(e.location().empty());
    EXPECT_EQ(e.location().front(), 1u);
  }
}

TEST(Conflict, SymmetrizesWorkedExample) {
  Matrix p(3, 3);
  p << 0.0, 0.8, 0.7, 0.6, 0.0, 0.9, 0.5, 0.8, 0.0;
  const ConflictMatrix c = symmetrize_conflict(p);
  Matrix expected(3, 3);
  expected << 0.0, 0.7, 0.6, 0.7, 0.0, 0.85, 0.6, 0.85, 0.0;
  EXPECT_LE((c.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Conflict, FixedPointsAndIdempotence) {
  Matrix sym(3, 3);
  sym << 0.0, 0.25, 0.5, 0.25, 0.0, 0.75, 0.5, 0.75, 0.0;
  EXPECT_EQ(symmetrize_conflict(sym).matrix(), sym);
  EXPECT_EQ(symmetrize_conflict(Matrix::Zero(4, 4)).matrix(), Matrix::Zero(4, 4));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix p(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) p(i, j) = u(rng);
  }
  const Matrix once = symmetrize_conflict(p).matrix();
  EXPECT_EQ(symmetrize_conflict(once).matrix(), once);
  EXPECT_EQ(once.diagonal(), Vector::Zero(6));
}

TEST(Conflict, RejectsOutOfRangeWithIndices) {
  Matrix p = Matrix::Zero(3, 3);
  p(2, 1) = 1.5;
  try {
    symmetrize_conflict(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidProbability);
    EXPECT_EQ(e.location(), (std::vector<std::size_t>{2, 1}));
  }
  p(2, 1) = -0.1;
  EXPECT_EQ(code_of([&] { symmetrize_conflict(p); }), ErrorCode::kInvalidProbability);
}

TEST(Conflict, FromSymmetricValidates) {
  Matrix bad(2, 2);
  bad << 0.0, 0.3, 0.4, 0.0;
  EXPECT_EQ(code_of([&] { ConflictMatrix::from_symmetric(bad); }), ErrorCode::kAsymmetry);
  Matrix diag(2, 2);
  diag << 0.1, 0.3, 0.3, 0.0;
  EXPECT_THROW(ConflictMatrix::from_symmetric(diag), Error);
}

TEST(Relevance, IdentityClampAndOracle) {
  const Embedding q(std::vector<double>{1, 0, 0});
  const std::vector<Embedding> ctx{Embedding(std::vector<double>{2, 0, 0}),
                                   Embedding(std::vector<double>{0, 1, 0}),
                                   Embedding(std::vector<double>{-1, 0, 0}),
                                   Embedding(std::vector<double>{1, 1, 0})};
  const Vector r = query_relevance(q, ctx);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_EQ(r[1], kRelevanceFloor);
  EXPECT_EQ(r[2], kRelevanceFloor);
  EXPECT_NEAR(r[3], std::sqrt(0.5), 1e-15);

  std::mt19937_64 rng(3);
  const auto raw = gaussian_vectors(rng, 25, 9);
  std::vector<Embedding> pool;
  for (std::size_t i = 1; i < raw.size(); ++i) pool.emplace_back(raw[i]);
  const Vector rr = query_relevance(Embedding(raw[0]), pool);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double expected = std::clamp(scalar_cosine(raw[0], raw[i + 1]), kRelevanceFloor, 1.0);
    EXPECT_NEAR(rr[static_cast<Eigen::Index>(i)], expected, 1e-12);
    EXPECT_GE(rr[static_cast<Eigen::Index>(i)], kRelevanceFloor);
    EXPECT_LE(rr[static_cast<Eigen::Index>(i)], 1.0);
  }
}

TEST(Relations, ValidateCatchesShapeErrors) {
  RelationMatrices rel{Matrix::Identity(2, 2), ConflictMatrix::zeros(3), Vector::Ones(2)};
  EXPECT_EQ(code_of([&] { rel.validate(); }), ErrorCode::kShapeMismatch);
}

TEST(Relations, BuildRelationsComposes) {
  const Embedding q(std::vector<double>{1, 1});
  const std::vector<Embedding> ctx{Embedding(std::vector<double>{1, 0}),
                                   Embedding(std::vector<double>{0, 1})};
  Matrix p(2, 2);
  p << 0.0, 0.2, 0.4, 0.0;
  const RelationMatrices rel = build_relations(q, ctx, p);
  EXPECT_NEAR(rel.conflict(0, 1), 0.3, 1e-15);
  EXPECT_EQ(rel.k_sim(0, 0), 1.0);
  EXPECT_NEAR(rel.relevance[0], std::sqrt(0.5), 1e-15);
  EXPECT_EQ(rel.size(), 2u);
}

}  // namespace
}  // namespace smart
