#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spectralk/similarity.hpp"

using namespace spectralk;

namespace {

EmbeddingSet two(std::vector<double> a, std::vector<double> b) {
  Matrix m(2, a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    m(0, j) = a[j];
    m(1, j) = b[j];
  }
  return EmbeddingSet(std::move(m));
}

EmbeddingSet random_embeddings(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  Matrix m(n, d);
  for (double& v : m.values()) v = g(gen);
  return EmbeddingSet(std::move(m));
}

Matrix sym3(double a, double b, double c) {
  Matrix m(3, 3, 0.0);
  for (std::size_t i = 0; i < 3; ++i) m(i, i) = 1.0;
  m(0, 1) = m(1, 0) = a;
  m(0, 2) = m(2, 0) = b;
  m(1, 2) = m(2, 1) = c;
  return m;
}

}  // namespace

TEST(CosineSimilarity, AnalyticPairs) {
  EXPECT_EQ(cosine_similarity_matrix(two({1, 2}, {1, 2}))(0, 1), 1.0);
  EXPECT_EQ(cosine_similarity_matrix(two({1, 0}, {0, 1}))(0, 1), 0.0);
  EXPECT_NEAR(cosine_similarity_matrix(two({1, 0}, {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}))(0, 1),
              std::sqrt(2.0) / 2, 1e-15);
  const auto s = cosine_similarity_matrix(two({1, 0}, {-1, 0}));
  EXPECT_EQ(s(0, 1), 0.0);
  EXPECT_EQ(s(0, 0), 1.0);
  EXPECT_EQ(s.variant(), SimilarityVariant::RectifiedCosine);
}

TEST(CosineSimilarity, RangeSymmetryAndPerRowScaling) {
  const EmbeddingSet e = random_embeddings(40, 6, 3);
  Matrix scaled = e.matrix();
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (std::size_t i = 0; i < scaled.rows(); ++i) {
    const double c = u(gen);
    for (double& v : scaled.row(i)) v *= c;
  }
  const auto s = cosine_similarity_matrix(e);
  const auto t = cosine_similarity_matrix(EmbeddingSet(scaled));
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(s(i, i), 1.0);
    for (std::size_t j = 0; j < 40; ++j) {
      EXPECT_GE(s(i, j), 0.0);
      EXPECT_LE(s(i, j), 1.0);
      EXPECT_EQ(s(i, j), s(j, i));
      EXPECT_NEAR(s(i, j), t(i, j), 1e-15);
    }
  }
}

TEST(CosineSimilarity, StreamingMatchesMatrix) {
  const EmbeddingSet e = random_embeddings(15, 4, 8);
  const auto s = cosine_similarity_matrix(e);
  for (std::size_t i = 0; i < 15; ++i) {
    for (std::size_t j = i + 1; j < 15; ++j) {
      EXPECT_EQ(rectified_cosine(e.row(i), squared_norm(e.row(i)), e.row(j), squared_norm(e.row(j))),
                s(i, j));
    }
  }
}

TEST(SimilarityMatrix, Validation) {
  Matrix bad = sym3(0.5, 0.5, 0.5);
  bad(0, 1) = 0.6;
  EXPECT_THROW(SimilarityMatrix(bad, SimilarityVariant::RectifiedCosine), Error);
  Matrix negative = sym3(-0.1, 0.5, 0.5);
  EXPECT_THROW(SimilarityMatrix(negative, SimilarityVariant::RectifiedCosine), Error);
  Matrix diag = sym3(0.2, 0.5, 0.5);
  diag(1, 1) = 0.9;
  EXPECT_THROW(SimilarityMatrix(diag, SimilarityVariant::RectifiedCosine), Error);
  EXPECT_THROW(SimilarityMatrix(Matrix(2, 3), SimilarityVariant::RectifiedCosine), Error);
}

TEST(ZScore, DegenerateSpreadLeavesInput) {
  const SimilarityMatrix s(sym3(0.4, 0.4, 0.4), SimilarityVariant::RectifiedCosine);
  const auto z = zscore_rectify(s);
  EXPECT_TRUE(z.degenerate_spread);
  EXPECT_EQ(z.matrix.matrix(), s.matrix());
}

TEST(ZScore, ThreePointHandComputation) {
  const SimilarityMatrix s(sym3(0.9, 0.1, 0.1), SimilarityVariant::RectifiedCosine);
  const auto z = zscore_rectify(s);
  EXPECT_FALSE(z.degenerate_spread);
  // mean 11/30, population sd over {0.9, 0.1, 0.1}; only the 0.9 entry survives and becomes the max.
  EXPECT_EQ(z.matrix(0, 1), 1.0);
  EXPECT_EQ(z.matrix(0, 2), 0.0);
  EXPECT_EQ(z.matrix(1, 2), 0.0);
  EXPECT_EQ(z.matrix(2, 2), 1.0);
  EXPECT_EQ(z.matrix.variant(), SimilarityVariant::ZScoreRectified);
}

TEST(ZScore, RangeSymmetryAndOrderOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = cosine_similarity_matrix(random_embeddings(12, 5, 100 + seed));
    const auto z = zscore_rectify(s).matrix;
    for (std::size_t i = 0; i < 12; ++i) {
      ASSERT_EQ(z(i, i), 1.0);
      for (std::size_t j = 0; j < 12; ++j) {
        ASSERT_GE(z(i, j), 0.0);
        ASSERT_LE(z(i, j), 1.0);
        ASSERT_EQ(z(i, j), z(j, i));
      }
    }
    // Order preservation over off-diagonal pairs.
    for (std::size_t a = 0; a < 12; ++a)
      for (std::size_t b = a + 1; b < 12; ++b)
        for (std::size_t c = 0; c < 12; ++c)
          for (std::size_t d = c + 1; d < 12; ++d)
            if (s(a, b) > s(c, d)) ASSERT_GE(z(a, b), z(c, d));
  }
}

TEST(ZScore, NeedsThreePoints) {
  const auto s = cosine_similarity_matrix(two({1, 0}, {1, 1}));
  EXPECT_THROW(zscore_rectify(s), Error);
}
