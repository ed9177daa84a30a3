#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spectralk/core.hpp"

namespace spectralk {

enum class SimilarityVariant { RectifiedCosine, ZScoreRectified };

/// Dense symmetric n x n affinity matrix with entries in [0, 1] and unit diagonal.
class SimilarityMatrix {
 public:
  /// Validates squareness, finiteness, symmetry (1e-12), range [0, 1] and unit diagonal.
  SimilarityMatrix(Matrix values, SimilarityVariant variant);

  std::size_t size() const noexcept { return values_.rows(); }
  SimilarityVariant variant() const noexcept { return variant_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
  std::span<const double> row(std::size_t i) const noexcept { return values_.row(i); }
  const Matrix& matrix() const noexcept { return values_; }

 private:
  Matrix values_;
  SimilarityVariant variant_;
};

/// s_ij = max(0, cos(z_i, z_j)), s_ii = 1.
SimilarityMatrix cosine_similarity_matrix(const EmbeddingSet& e);

/// Rectified cosine between two rows given their squared norms, clamped to
/// [0, 1]; the same value `cosine_similarity_matrix` stores for the pair.
double rectified_cosine(std::span<const double> a, double sq_norm_a, std::span<const double> b,
                        double sq_norm_b) noexcept;
/// Sum of squares with the same reduction order rectified_cosine uses.
double squared_norm(std::span<const double> a) noexcept;

struct ZScoreOutcome {
  SimilarityMatrix matrix;
  /// True when the off-diagonal spread was below 1e-12; `matrix` is then the input unchanged.
  bool degenerate_spread = false;
};

/// Off-diagonal z-scoring followed by rectification and max-rescaling to [0, 1].
/// Requires n >= 3.
ZScoreOutcome zscore_rectify(const SimilarityMatrix& s);

}  // namespace spectralk
