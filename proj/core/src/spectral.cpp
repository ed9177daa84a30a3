#include "spectralk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spectralk {

Spectrum::Spectrum(std::vector<double> eigenvalues) : values_(std::move(eigenvalues)) {
  std::ranges::sort(values_);
}

Matrix normalized_laplacian(const SimilarityMatrix& s) {
  const std::size_t n = s.size();
  std::vector<double> inv_sqrt_degree(n);
  std::vector<double> degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double v : s.row(i)) sum += v;
    if (!(sum > 0.0)) throw Error(Errc::ZeroDegree, "row " + std::to_string(i) + " has zero degree");
    degree[i] = sum;
    inv_sqrt_degree[i] = 1.0 / std::sqrt(sum);
  }
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    l(i, i) = 1.0 - s(i, i) / degree[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = -s(i, j) * inv_sqrt_degree[i] * inv_sqrt_degree[j];
      l(i, j) = v;
      l(j, i) = v;
    }
  }
  return l;
}

Spectrum eigenvalues_symmetric(Matrix m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw Error(Errc::InvalidArgument, "matrix must be square");
  if (n < 2) throw Error(Errc::InvalidArgument, "eigenvalue problem needs n >= 2");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!std::isfinite(m(i, j)) || !std::isfinite(m(j, i))) {
        throw Error(Errc::NonFinite, "non-finite matrix entry");
      }
      if (std::abs(m(i, j) - m(j, i)) > 1e-9) {
        throw Error(Errc::NotSymmetric, "entries (" + std::to_string(i) + "," + std::to_string(j) +
                                            ") differ by more than 1e-9");
      }
      m(i, j) = 0.5 * (m(i, j) + m(j, i));
    }
    if (!std::isfinite(m(i, i))) throw Error(Errc::NonFinite, "non-finite matrix entry");
  }
  auto tri = detail::tridiagonalize(m);
  return Spectrum(detail::tridiagonal_eigenvalues(std::move(tri)));
}

Spectrum compute_eigenvalues(const EmbeddingSet& e, bool use_zscore) {
  SimilarityMatrix s = cosine_similarity_matrix(e);
  if (use_zscore) {
    // A degenerate spread leaves the rectified cosine matrix in place.
    s = zscore_rectify(s).matrix;
  }
  return eigenvalues_symmetric(normalized_laplacian(s));
}

}  // namespace spectralk
