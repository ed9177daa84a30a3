#include <cmath>
#include <limits>
#include <string>

#include "spectralk/spectral.hpp"

namespace spectralk::detail {

namespace {

// std::hypot is several times slower than a plain square root and only needed
// when the squares would leave the normal range.
inline double fast_hypot(double a, double b) noexcept {
  const double sq = a * a + b * b;
  if (sq > 1e-290 && sq < 1e290) return std::sqrt(sq);
  return std::hypot(a, b);
}

}  // namespace

// Householder reduction A <- H A H with H = I - tau v v^T, v[k + 1] = 1, working
// on the upper triangle so that column k below the diagonal is the contiguous
// row k. Each step's rank-2 update A -= v w^T + w v^T is deferred and fused with
// the next step's product p = A v, so the trailing triangle is streamed once per
// step instead of twice.
Tridiagonal tridiagonalize(Matrix& a) {
  const std::size_t n = a.rows();
  Tridiagonal t;
  t.diagonal.assign(n, 0.0);
  t.offdiagonal.assign(n > 0 ? n - 1 : 0, 0.0);
  if (n == 0) return t;
  if (n == 1) {
    t.diagonal[0] = a(0, 0);
    return t;
  }

  // Pending update from the previous step (zeros when there is none).
  std::vector<double> pend_v(n, 0.0), pend_w(n, 0.0);
  std::vector<double> v(n, 0.0), p(n, 0.0);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    double* rowk = &a(k, 0);
    for (std::size_t j = k; j < n; ++j) {
      rowk[j] -= pend_v[k] * pend_w[j] + pend_w[k] * pend_v[j];
    }
    t.diagonal[k] = rowk[k];

    const double alpha = rowk[k + 1];
    double tail = 0.0;
    for (std::size_t j = k + 2; j < n; ++j) tail += rowk[j] * rowk[j];

    double tau = 0.0;
    std::fill(v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), 0.0);
    if (tail == 0.0) {
      t.offdiagonal[k] = alpha;
    } else {
      const double norm = std::sqrt(alpha * alpha + tail);
      const double beta = alpha > 0.0 ? -norm : norm;
      tau = (beta - alpha) / beta;
      const double scale = 1.0 / (alpha - beta);
      v[k + 1] = 1.0;
      for (std::size_t j = k + 2; j < n; ++j) v[j] = rowk[j] * scale;
      t.offdiagonal[k] = beta;
    }

    // Apply the pending update to the trailing triangle and accumulate p = A22 v.
    std::fill(p.begin() + static_cast<std::ptrdiff_t>(k), p.end(), 0.0);
    const double* pv = pend_v.data();
    const double* pw = pend_w.data();
    const double* vv = v.data();
    double* pp = p.data();
    for (std::size_t i = k + 1; i < n; ++i) {
      double* row = &a(i, 0);
      const double pvi = pv[i];
      const double pwi = pw[i];
      const double vi = vv[i];
      const double diag = row[i] - 2.0 * pvi * pwi;
      row[i] = diag;
      double acc = diag * vi;
#pragma omp simd reduction(+ : acc)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double x = row[j] - (pvi * pw[j] + pwi * pv[j]);
        row[j] = x;
        acc += x * vv[j];
        pp[j] += x * vi;
      }
      pp[i] += acc;
    }

    if (tau != 0.0) {
      double pv_dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) {
        p[i] *= tau;
        pv_dot += p[i] * v[i];
      }
      const double shift = -0.5 * tau * pv_dot;
      for (std::size_t i = 0; i <= k; ++i) {
        pend_v[i] = 0.0;
        pend_w[i] = 0.0;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        pend_v[i] = v[i];
        pend_w[i] = p[i] + shift * v[i];
      }
    } else {
      std::fill(pend_v.begin(), pend_v.end(), 0.0);
      std::fill(pend_w.begin(), pend_w.end(), 0.0);
    }
  }

  const std::size_t m = n - 2;
  for (std::size_t i = m; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      a(i, j) -= pend_v[i] * pend_w[j] + pend_w[i] * pend_v[j];
    }
  }
  t.diagonal[m] = a(m, m);
  t.diagonal[m + 1] = a(m + 1, m + 1);
  t.offdiagonal[m] = a(m, m + 1);
  return t;
}

// Implicit QL with Wilkinson-style shifts, eigenvalues only.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
  std::vector<double>& d = t.diagonal;
  std::vector<double> e = std::move(t.offdiagonal);
  const std::size_t n = d.size();
  e.resize(n, 0.0);
  constexpr int kMaxSweeps = 60;
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int sweeps = 0;
    while (true) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++sweeps > kMaxSweeps) {
        throw Error(Errc::NoConvergence,
                    "QL iteration did not converge for eigenvalue " + std::to_string(l));
      }

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = fast_hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, shift = 0.0;
      bool deflated = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = fast_hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          // Underflow split: restart on the smaller block.
          d[i + 1] -= shift;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - shift;
        r = (d[i] - g) * s + 2.0 * c * b;
        shift = s * r;
        d[i + 1] = g + shift;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= shift;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  return std::move(d);
}

}  // namespace spectralk::detail
