#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spectralk/core.hpp"
#include "spectralk/similarity.hpp"

namespace spectralk {

/// Eigenvalues of a symmetric matrix in ascending order.
class Spectrum {
 public:
  /// Sorts the values ascending.
  explicit Spectrum(std::vector<double> eigenvalues);

  std::size_t size() const noexcept { return values_.size(); }
  /// 0-based access; the estimator's 1-based index i maps to `values()[i - 1]`.
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
};

/// L = I - D^{-1/2} S D^{-1/2} with D_ii = sum_j s_ij. Throws ZeroDegree if a row sum is not positive.
Matrix normalized_laplacian(const SimilarityMatrix& s);

/// Full spectrum of a symmetric matrix (n >= 2). The input is symmetrized as
/// (M + M^T) / 2 after checking |m_ij - m_ji| <= 1e-9 (NotSymmetric otherwise).
/// Householder tridiagonalization followed by implicit-shift QL.
Spectrum eigenvalues_symmetric(Matrix m);

/// cosine similarity -> (optional z-score) -> normalized Laplacian -> eigenvalues.
Spectrum compute_eigenvalues(const EmbeddingSet& e, bool use_zscore);

namespace detail {

struct Tridiagonal {
  std::vector<double> diagonal;
  std::vector<double> offdiagonal;  // size n - 1; couples i and i + 1
};

/// Reduces a symmetric matrix (upper triangle is read) to tridiagonal form.
/// `m` is overwritten.
Tridiagonal tridiagonalize(Matrix& m);

/// Eigenvalues of a symmetric tridiagonal matrix, unsorted. Throws NoConvergence.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t);

}  // namespace detail

}  // namespace spectralk
