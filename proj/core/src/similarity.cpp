#include "spectralk/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spectralk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  const std::size_t d = a.size();
#pragma omp simd reduction(+ : acc)
  for (std::size_t k = 0; k < d; ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace

double squared_norm(std::span<const double> a) noexcept { return dot(a, a); }

SimilarityMatrix::SimilarityMatrix(Matrix values, SimilarityVariant variant)
    : values_(std::move(values)), variant_(variant) {
  const std::size_t n = values_.rows();
  if (values_.cols() != n) throw Error(Errc::InvalidArgument, "similarity matrix must be square");
  if (n < 2) throw Error(Errc::TooFewPoints, "similarity matrix needs at least 2 points");
  for (std::size_t i = 0; i < n; ++i) {
    if (values_(i, i) != 1.0) {
      throw Error(Errc::InvalidArgument, "diagonal entry " + std::to_string(i) + " is not 1");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values_(i, j);
      if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite similarity");
      if (v < 0.0 || v > 1.0) {
        throw Error(Errc::OutOfRange, "similarity entry outside [0, 1]");
      }
      if (j < i && std::abs(v - values_(j, i)) > 1e-12) {
        throw Error(Errc::NotSymmetric, "similarity matrix is not symmetric");
      }
    }
  }
}

double rectified_cosine(std::span<const double> a, double sq_norm_a, std::span<const double> b,
                        double sq_norm_b) noexcept {
  // sqrt of the product keeps identical rows at exactly 1.
  const double c = dot(a, b) / std::sqrt(sq_norm_a * sq_norm_b);
  return std::clamp(c, 0.0, 1.0);
}

SimilarityMatrix cosine_similarity_matrix(const EmbeddingSet& e) {
  const std::size_t n = e.size();
  std::vector<double> sq_norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq_norms[i] = dot(e.row(i), e.row(i));
    if (std::sqrt(sq_norms[i]) < 1e-30) throw Error(Errc::ZeroVector, "row " + std::to_string(i));
  }
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = rectified_cosine(e.row(i), sq_norms[i], e.row(j), sq_norms[j]);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SimilarityMatrix(std::move(s), SimilarityVariant::RectifiedCosine);
}

ZScoreOutcome zscore_rectify(const SimilarityMatrix& s) {
  const std::size_t n = s.size();
  if (n < 3) throw Error(Errc::TooFewPoints, "z-scoring needs at least 3 points");

  // Population: each unordered off-diagonal pair once.
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sum += s(i, j);
  const double mean = sum / pairs;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sq += (s(i, j) - mean) * (s(i, j) - mean);
  const double sd = std::sqrt(sq / pairs);
  if (sd < 1e-12) return ZScoreOutcome{s, true};

  Matrix out(n, n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double z = std::max(0.0, (s(i, j) - mean) / sd);
      out(i, j) = z;
      peak = std::max(peak, z);
    }
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = out(i, j) / peak;
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return ZScoreOutcome{SimilarityMatrix(std::move(out), SimilarityVariant::ZScoreRectified),
                       false};
}

}  // namespace spectralk
