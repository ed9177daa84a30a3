#include "spectralk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace spectralk {

namespace {

double choose2(std::uint64_t m) noexcept {
  return static_cast<double>(m) * static_cast<double>(m == 0 ? 0 : m - 1) / 2.0;
}

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), counts_(rows * cols, 0), row_sums_(rows, 0), col_sums_(cols, 0) {}

void ContingencyTable::add(std::size_t a, std::size_t b) noexcept {
  ++counts_[a * cols_ + b];
  ++row_sums_[a];
  ++col_sums_[b];
  ++total_;
}

ContingencyTable contingency(const Partition& labels, const Partition& clusters) {
  if (labels.size() != clusters.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(labels.size()) + " labels vs " +
                                          std::to_string(clusters.size()) + " assignments");
  }
  ContingencyTable t(labels.group_count(), clusters.group_count());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    t.add(static_cast<std::size_t>(labels[i]), static_cast<std::size_t>(clusters[i]));
  }
  return t;
}

double ari(const ContingencyTable& t) {
  if (t.total() < 2) throw Error(Errc::Degenerate, "ARI needs at least 2 items");
  double index = 0.0;
  for (std::size_t a = 0; a < t.rows(); ++a)
    for (std::size_t b = 0; b < t.cols(); ++b) index += choose2(t(a, b));
  double row_pairs = 0.0, col_pairs = 0.0;
  for (auto s : t.row_sums()) row_pairs += choose2(s);
  for (auto s : t.col_sums()) col_pairs += choose2(s);
  const double expected = row_pairs * col_pairs / choose2(t.total());
  const double maximum = 0.5 * (row_pairs + col_pairs);
  if (maximum == expected) return index == maximum ? 1.0 : 0.0;
  return (index - expected) / (maximum - expected);
}

NmiScores nmi_family(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total());
  auto entropy = [n](std::span<const std::uint64_t> sums) {
    double h = 0.0;
    for (auto s : sums) {
      if (s == 0) continue;
      const double p = static_cast<double>(s) / n;
      h -= p * std::log(p);
    }
    return h;
  };
  const double h_class = entropy(t.row_sums());
  const double h_cluster = entropy(t.col_sums());
  double mi = 0.0;
  for (std::size_t a = 0; a < t.rows(); ++a) {
    for (std::size_t b = 0; b < t.cols(); ++b) {
      const auto nab = t(a, b);
      if (nab == 0) continue;
      const double joint = static_cast<double>(nab);
      mi += joint / n *
            std::log(n * joint /
                     (static_cast<double>(t.row_sums()[a]) * static_cast<double>(t.col_sums()[b])));
    }
  }
  mi = std::max(mi, 0.0);

  NmiScores out;
  out.homogeneity = h_class > 0.0 ? std::min(1.0, mi / h_class) : 1.0;
  out.completeness = h_cluster > 0.0 ? std::min(1.0, mi / h_cluster) : 1.0;
  const double denom = 0.5 * (h_class + h_cluster);
  out.nmi = denom > 0.0 ? std::min(1.0, mi / denom) : 1.0;
  return out;
}

double fmi(const ContingencyTable& t) {
  double tp = 0.0;
  for (std::size_t a = 0; a < t.rows(); ++a)
    for (std::size_t b = 0; b < t.cols(); ++b) tp += choose2(t(a, b));
  if (tp == 0.0) return 0.0;
  double same_class = 0.0, same_cluster = 0.0;
  for (auto s : t.row_sums()) same_class += choose2(s);
  for (auto s : t.col_sums()) same_cluster += choose2(s);
  return tp / std::sqrt(same_cluster * same_class);
}

double relative_error_k(std::size_t k_hat, std::size_t k_true) {
  if (k_true == 0) throw Error(Errc::InvalidArgument, "true cluster count must be positive");
  const double diff = k_hat > k_true ? static_cast<double>(k_hat - k_true)
                                     : static_cast<double>(k_true - k_hat);
  return diff / static_cast<double>(k_true);
}

namespace {

// One pass over i < j in lexicographic order; the single-cluster partition
// therefore accumulates its intra sum in exactly the global order.
template <typename PairSimilarity>
CohesionComponents cohesion_impl(std::size_t n, const Clustering& c, PairSimilarity&& sim) {
  if (c.size() != n) {
    throw Error(Errc::LengthMismatch, std::to_string(c.size()) + " assignments for " +
                                          std::to_string(n) + " points");
  }
  if (n < 2) throw Error(Errc::TooFewPoints, "cohesion ratio needs at least 2 points");

  std::vector<double> intra(c.group_count(), 0.0);
  double global = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int ci = c[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = sim(i, j);
      global += s;
      if (c[j] == ci) intra[static_cast<std::size_t>(ci)] += s;
    }
  }

  CohesionComponents out;
  out.mu_global = global / choose2(n);
  double intra_sum = 0.0;
  double intra_pairs = 0.0;
  for (std::size_t k = 0; k < c.group_count(); ++k) {
    intra_sum += intra[k];
    intra_pairs += choose2(c.sizes()[k]);
    if (c.sizes()[k] == 1) ++out.singletons;
  }
  out.pairs = intra_pairs + static_cast<double>(out.singletons);
  out.mu_intra = intra_pairs == 0.0
                     ? out.mu_global
                     : (intra_sum + static_cast<double>(out.singletons) * out.mu_global) / out.pairs;
  out.ratio = out.mu_global < 1e-15 ? 1.0 : out.mu_intra / out.mu_global;
  return out;
}

}  // namespace

CohesionComponents cohesion_components(const SimilarityMatrix& s, const Clustering& c) {
  return cohesion_impl(s.size(), c, [&s](std::size_t i, std::size_t j) { return s(i, j); });
}

double cohesion_ratio(const SimilarityMatrix& s, const Clustering& c) {
  return cohesion_components(s, c).ratio;
}

CohesionComponents cohesion_components(const EmbeddingSet& e, const Clustering& c) {
  std::vector<double> sq_norms(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) sq_norms[i] = squared_norm(e.row(i));
  return cohesion_impl(e.size(), c, [&](std::size_t i, std::size_t j) {
    return rectified_cosine(e.row(i), sq_norms[i], e.row(j), sq_norms[j]);
  });
}

double cohesion_ratio(const EmbeddingSet& e, const Clustering& c) {
  return cohesion_components(e, c).ratio;
}

CohesionInformation cohesion_information(double mu_i, double mu_g) {
  auto inside = [](double p) { return p > 0.0 && p < 1.0; };
  if (!inside(mu_i) || !inside(mu_g)) {
    throw Error(Errc::OutOfRange, "cohesion information needs mu_i, mu_g in (0, 1)");
  }
  CohesionInformation out;
  out.pmi = std::log(mu_i / mu_g);
  out.kl = mu_i * std::log(mu_i / mu_g) + (1.0 - mu_i) * std::log((1.0 - mu_i) / (1.0 - mu_g));
  return out;
}

double silhouette(const EmbeddingSet& e, const Clustering& c, Distance distance) {
  const std::size_t n = e.size();
  if (c.size() != n) throw Error(Errc::LengthMismatch, "assignment length differs from n");
  if (c.group_count() < 2) throw Error(Errc::SingleCluster, "silhouette needs at least 2 clusters");
  if (n < 3) throw Error(Errc::TooFewPoints, "silhouette needs at least 3 points");

  const std::size_t k = c.group_count();
  std::vector<double> sums(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = static_cast<std::size_t>(c[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = pairwise_distance(e.row(i), e.row(j), distance);
      sums[i * k + static_cast<std::size_t>(c[j])] += dij;
      sums[j * k + ci] += dij;
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(c[i]);
    const std::size_t own_size = c.sizes()[own];
    if (own_size == 1) continue;
    const double a = sums[i * k + own] / static_cast<double>(own_size - 1);
    double b = kInfinity;
    for (std::size_t other = 0; other < k; ++other) {
      if (other == own) continue;
      b = std::min(b, sums[i * k + other] / static_cast<double>(c.sizes()[other]));
    }
    const double scale = std::max(a, b);
    if (scale > 0.0) total += (b - a) / scale;
  }
  return total / static_cast<double>(n);
}

namespace {

Matrix centroids_of(const EmbeddingSet& e, const Clustering& c) {
  Matrix centroids(c.group_count(), e.dim());
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto target = centroids.row(static_cast<std::size_t>(c[i]));
    const auto source = e.row(i);
    for (std::size_t j = 0; j < e.dim(); ++j) target[j] += source[j];
  }
  for (std::size_t g = 0; g < c.group_count(); ++g) {
    for (double& x : centroids.row(g)) x /= static_cast<double>(c.sizes()[g]);
  }
  return centroids;
}

double euclid(std::span<const double> a, std::span<const double> b) {
  return pairwise_distance(a, b, Distance::Euclidean);
}

void require_partition(const EmbeddingSet& e, const Clustering& c) {
  if (c.size() != e.size()) throw Error(Errc::LengthMismatch, "assignment length differs from n");
  if (c.group_count() < 2) throw Error(Errc::SingleCluster, "index needs at least 2 clusters");
}

}  // namespace

double davies_bouldin(const EmbeddingSet& e, const Clustering& c) {
  require_partition(e, c);
  const std::size_t k = c.group_count();
  const Matrix centroids = centroids_of(e, c);
  std::vector<double> scatter(k, 0.0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto g = static_cast<std::size_t>(c[i]);
    scatter[g] += euclid(e.row(i), centroids.row(g));
  }
  for (std::size_t g = 0; g < k; ++g) scatter[g] /= static_cast<double>(c.sizes()[g]);

  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const double spread = scatter[a] + scatter[b];
      const double separation = euclid(centroids.row(a), centroids.row(b));
      double ratio;
      if (spread == 0.0) {
        ratio = 0.0;
      } else if (separation == 0.0) {
        ratio = kInfinity;
      } else {
        ratio = spread / separation;
      }
      worst = std::max(worst, ratio);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

double calinski_harabasz(const EmbeddingSet& e, const Clustering& c) {
  require_partition(e, c);
  const std::size_t n = e.size();
  const std::size_t k = c.group_count();
  if (n == k) throw Error(Errc::Saturated, "every point is its own cluster");

  const Matrix centroids = centroids_of(e, c);
  std::vector<double> mean(e.dim(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < e.dim(); ++j) mean[j] += e.row(i)[j];
  for (double& m : mean) m /= static_cast<double>(n);

  double between = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    const double dist = euclid(centroids.row(g), mean);
    between += static_cast<double>(c.sizes()[g]) * dist * dist;
  }
  double within = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dist = euclid(e.row(i), centroids.row(static_cast<std::size_t>(c[i])));
    within += dist * dist;
  }
  if (within == 0.0) return kInfinity;
  return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && x[order[end]] == x[order[start]]) ++end;
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t p = start; p < end; ++p) ranks[order[p]] = rank;
    start = end;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::LengthMismatch, "spearman inputs differ in length");
  if (x.size() < 3) throw Error(Errc::TooFewPoints, "spearman needs at least 3 observations");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) && !std::isinf(x[i])) throw Error(Errc::NonFinite, "NaN in spearman input");
    if (!std::isfinite(y[i]) && !std::isinf(y[i])) throw Error(Errc::NonFinite, "NaN in spearman input");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(Errc::ZeroVariance, "constant input to spearman");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MetricReport evaluate(const EmbeddingSet& e, const Clustering& c, const LabelVector* labels,
                      const EvaluationOptions& options) {
  if (c.size() != e.size()) throw Error(Errc::LengthMismatch, "assignment length differs from n");
  MetricReport report;
  report.k_pred = c.group_count();
  report.cohesion_ratio = cohesion_ratio(e, c);
  if (c.group_count() >= 2) {
    if (e.size() >= 3) report.silhouette = silhouette(e, c, options.silhouette_distance);
    report.dbi = davies_bouldin(e, c);
    if (e.size() > c.group_count()) report.chi = calinski_harabasz(e, c);
  }
  if (labels != nullptr) {
    const ContingencyTable t = contingency(*labels, c);
    report.ari = ari(t);
    const NmiScores scores = nmi_family(t);
    report.nmi = scores.nmi;
    report.homogeneity = scores.homogeneity;
    report.completeness = scores.completeness;
    report.fmi = fmi(t);
    report.k_true = labels->group_count();
    report.re_k = relative_error_k(c.group_count(), labels->group_count());
  }
  return report;
}

}  // namespace spectralk
