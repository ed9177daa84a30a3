#include "spectralk/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "spectralk/rng.hpp"

namespace spectralk {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  const std::size_t d = a.size();
#pragma omp simd reduction(+ : acc)
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

Matrix kmeans_plus_plus(const EmbeddingSet& e, std::size_t k, Rng& rng) {
  const std::size_t n = e.size();
  Matrix centroids(k, e.dim());
  std::vector<bool> chosen(n, false);
  std::vector<double> closest(n, std::numeric_limits<double>::infinity());

  std::size_t pick = static_cast<std::size_t>(rng.below(n));
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (double dist : closest) total += dist;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double running = 0.0;
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (closest[i] <= 0.0) continue;
          running += closest[i];
          pick = i;
          if (running > target) break;
        }
      } else {
        // Every point coincides with a chosen centroid.
        pick = static_cast<std::size_t>(std::ranges::find(chosen, false) - chosen.begin());
        if (pick == n) pick = 0;
      }
    }
    chosen[pick] = true;
    std::ranges::copy(e.row(pick), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i], squared_distance(e.row(i), centroids.row(c)));
    }
  }
  return centroids;
}

struct LloydRun {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
  std::vector<double> trace;
};

LloydRun lloyd(const EmbeddingSet& e, Matrix centroids, std::size_t max_iter, double shift_tol) {
  const std::size_t n = e.size();
  const std::size_t k = centroids.rows();
  const std::size_t d = e.dim();
  LloydRun run;
  run.labels.assign(n, 0);
  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> counts(k, 0);

  for (std::size_t iter = 0; iter < std::max<std::size_t>(max_iter, 1); ++iter) {
    std::ranges::fill(counts, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_dist = squared_distance(e.row(i), centroids.row(0));
      for (std::size_t c = 1; c < k; ++c) {
        const double dc = squared_distance(e.row(i), centroids.row(c));
        if (dc < best_dist) {
          best_dist = dc;
          best = c;
        }
      }
      run.labels[i] = static_cast<int>(best);
      dist[i] = best_dist;
      ++counts[best];
    }

    // Empty clusters take the point farthest from its centroid (lowest index on ties).
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t donor = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(run.labels[i])] < 2) continue;
        if (donor == n || dist[i] > dist[donor]) donor = i;
      }
      --counts[static_cast<std::size_t>(run.labels[donor])];
      run.labels[donor] = static_cast<int>(c);
      counts[c] = 1;
      dist[donor] = 0.0;
      std::ranges::copy(e.row(donor), centroids.row(c).begin());
    }

    double inertia = 0.0;
    for (double v : dist) inertia += v;
    run.trace.push_back(inertia);
    run.iterations = iter + 1;

    Matrix updated(k, d);
    for (std::size_t i = 0; i < n; ++i) {
      auto target = updated.row(static_cast<std::size_t>(run.labels[i]));
      const auto source = e.row(i);
      for (std::size_t j = 0; j < d; ++j) target[j] += source[j];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (double& x : updated.row(c)) x /= static_cast<double>(counts[c]);
      shift += squared_distance(updated.row(c), centroids.row(c));
    }
    centroids = std::move(updated);
    if (shift <= shift_tol) break;
  }

  run.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run.inertia += squared_distance(e.row(i), centroids.row(static_cast<std::size_t>(run.labels[i])));
  }
  run.centroids = std::move(centroids);
  return run;
}

double mean_feature_variance(const EmbeddingSet& e) {
  const std::size_t n = e.size();
  const std::size_t d = e.dim();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += e.row(i)[j];
  for (double& m : mean) m /= static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = e.row(i)[j] - mean[j];
      total += diff * diff;
    }
  return total / static_cast<double>(n * d);
}

}  // namespace

KMeansResult kmeans(const EmbeddingSet& e, const KMeansConfig& cfg) {
  if (cfg.k < 1) throw Error(Errc::InvalidArgument, "k must be at least 1");
  if (cfg.n_init < 1) throw Error(Errc::InvalidArgument, "n_init must be at least 1");
  if (cfg.k > e.size()) {
    throw Error(Errc::KTooLarge, "k = " + std::to_string(cfg.k) + " exceeds n = " +
                                     std::to_string(e.size()));
  }
  const double shift_tol = cfg.tol * mean_feature_variance(e);

  std::optional<LloydRun> best;
  for (std::size_t restart = 0; restart < cfg.n_init; ++restart) {
    Rng rng(derive_seed(cfg.seed, restart));
    LloydRun run = lloyd(e, kmeans_plus_plus(e, cfg.k, rng), cfg.max_iter, shift_tol);
    if (!best || run.inertia < best->inertia) best = std::move(run);
  }
  return KMeansResult{Clustering(std::move(best->labels), cfg.k), std::move(best->centroids),
                      best->inertia, best->iterations, std::move(best->trace)};
}

double pairwise_distance(std::span<const double> a, std::span<const double> b,
                         Distance distance) {
  if (distance == Distance::Euclidean) return std::sqrt(squared_distance(a, b));
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  return 1.0 - ab / (std::sqrt(aa) * std::sqrt(bb));
}

namespace {

class CondensedDistances {
 public:
  explicit CondensedDistances(std::size_t n) : n_(n), values_(n * (n - 1) / 2) {}
  double& operator()(std::size_t i, std::size_t j) noexcept {
    if (i > j) std::swap(i, j);
    return values_[i * n_ - i * (i + 1) / 2 + (j - i - 1)];
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

}  // namespace

Dendrogram hac_dendrogram(const EmbeddingSet& e, Linkage linkage, Distance distance) {
  const std::size_t n = e.size();
  CondensedDistances dist(n);
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double x : e.row(i)) sq += x * x;
    norms[i] = std::sqrt(sq);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance == Distance::Euclidean) {
        dist(i, j) = std::sqrt(squared_distance(e.row(i), e.row(j)));
      } else {
        double ab = 0.0;
        const auto a = e.row(i);
        const auto b = e.row(j);
        for (std::size_t k = 0; k < a.size(); ++k) ab += a[k] * b[k];
        dist(i, j) = 1.0 - ab / (norms[i] * norms[j]);
      }
    }
  }

  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> nn(n, kNone);
  std::vector<double> nn_dist(n, std::numeric_limits<double>::infinity());

  auto rescan = [&](std::size_t i) {
    nn[i] = kNone;
    nn_dist[i] = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!active[j]) continue;
      const double dij = dist(i, j);
      if (nn[i] == kNone || dij < nn_dist[i]) {
        nn[i] = j;
        nn_dist[i] = dij;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) rescan(i);

  Dendrogram out;
  out.leaves = n;
  out.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t a = kNone;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || nn[i] == kNone) continue;
      if (a == kNone || nn_dist[i] < nn_dist[a]) a = i;
    }
    const std::size_t b = nn[a];
    const double height = nn_dist[a];
    const double size_a = static_cast<double>(size[a]);
    const double size_b = static_cast<double>(size[b]);

    for (std::size_t l = 0; l < n; ++l) {
      if (!active[l] || l == a || l == b) continue;
      const double da = dist(l, a);
      const double db = dist(l, b);
      double merged = 0.0;
      switch (linkage) {
        case Linkage::Average: merged = (size_a * da + size_b * db) / (size_a + size_b); break;
        case Linkage::Complete: merged = std::max(da, db); break;
        case Linkage::Single: merged = std::min(da, db); break;
      }
      dist(l, a) = merged;
    }
    size[a] += size[b];
    active[b] = false;
    out.merges.push_back(Merge{a, b, height});

    for (std::size_t l = 0; l < n; ++l) {
      if (!active[l]) continue;
      if (l < a) {
        if (nn[l] == a || nn[l] == b) {
          rescan(l);
        } else {
          const double dla = dist(l, a);
          if (dla < nn_dist[l] || (dla == nn_dist[l] && a < nn[l])) {
            nn[l] = a;
            nn_dist[l] = dla;
          }
        }
      } else if (l == a) {
        rescan(l);
      } else if (l < b) {
        if (nn[l] == b) rescan(l);
      } else {
        break;
      }
    }
  }
  return out;
}

Clustering Dendrogram::cut(std::size_t k) const {
  if (k < 1 || k > leaves) {
    throw Error(Errc::KTooLarge, "cannot cut " + std::to_string(leaves) + " leaves into " +
                                     std::to_string(k) + " clusters");
  }
  std::vector<std::size_t> parent(leaves);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t m = 0; m < leaves - k; ++m) {
    parent[find(merges[m].right)] = find(merges[m].left);
  }
  constexpr int kUnset = -1;
  std::vector<int> cluster_of_root(leaves, kUnset);
  std::vector<int> ids(leaves);
  int next = 0;
  for (std::size_t i = 0; i < leaves; ++i) {
    const std::size_t root = find(i);
    if (cluster_of_root[root] == kUnset) cluster_of_root[root] = next++;
    ids[i] = cluster_of_root[root];
  }
  return Clustering(std::move(ids), k);
}

Clustering hac(const EmbeddingSet& e, const HacConfig& cfg) {
  if (cfg.k < 1 || cfg.k > e.size()) {
    throw Error(Errc::KTooLarge, "k = " + std::to_string(cfg.k) + " outside [1, " +
                                     std::to_string(e.size()) + "]");
  }
  return hac_dendrogram(e, cfg.linkage, cfg.distance).cut(cfg.k);
}

}  // namespace spectralk
