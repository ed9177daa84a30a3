#include "spectralk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spectralk/rng.hpp"

namespace spectralk {

namespace {

constexpr std::size_t kPlacementBudget = 10000;

enum Stream : std::uint64_t { kCenters = 0, kSizes = 1, kPoints = 2 };

void check_spec(const MixtureSpec& s) {
  if (s.k < 1) throw Error(Errc::InvalidArgument, "k must be at least 1");
  if (s.n < s.k) throw Error(Errc::InvalidArgument, "n must be at least k");
  if (s.n < 2) throw Error(Errc::InvalidArgument, "n must be at least 2");
  if (s.d < 2) throw Error(Errc::InvalidArgument, "d must be at least 2");
  if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) {
    throw Error(Errc::InvalidArgument, "sigma must be positive");
  }
  if (!(s.min_sep >= 0.0 && s.min_sep <= std::numbers::pi)) {
    throw Error(Errc::InvalidArgument, "min_sep must lie in [0, pi]");
  }
  if (s.balance == Balance::Dirichlet && !(s.alpha > 0.0)) {
    throw Error(Errc::InvalidArgument, "Dirichlet alpha must be positive");
  }
}

void normalize_in_place(std::span<double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
}

double angle_between(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

Matrix place_centers(const MixtureSpec& s) {
  Rng rng(derive_seed(s.seed, kCenters));
  Matrix centers(s.k, s.d);
  std::vector<double> candidate(s.d);
  std::size_t placed = 0;
  for (std::size_t attempt = 0; attempt < kPlacementBudget && placed < s.k; ++attempt) {
    double sq = 0.0;
    do {
      sq = 0.0;
      for (double& x : candidate) {
        x = rng.normal();
        sq += x * x;
      }
    } while (sq == 0.0);
    normalize_in_place(candidate);
    bool ok = true;
    for (std::size_t c = 0; c < placed && ok; ++c) {
      ok = angle_between(candidate, centers.row(c)) >= s.min_sep;
    }
    if (!ok) continue;
    std::ranges::copy(candidate, centers.row(placed).begin());
    ++placed;
  }
  if (placed < s.k) {
    throw Error(Errc::InfeasibleSeparation,
                "placed only " + std::to_string(placed) + " of " + std::to_string(s.k) +
                    " centers with min_sep " + std::to_string(s.min_sep) + " in d = " +
                    std::to_string(s.d));
  }
  return centers;
}

std::vector<std::size_t> class_sizes(const MixtureSpec& s) {
  std::vector<std::size_t> sizes(s.k, s.n / s.k);
  if (s.balance == Balance::Equal) {
    for (std::size_t c = 0; c < s.n % s.k; ++c) ++sizes[c];
    return sizes;
  }
  // Largest-remainder apportionment of the n - k free points.
  Rng rng(derive_seed(s.seed, kSizes));
  std::vector<double> weights(s.k);
  double total = 0.0;
  for (double& w : weights) {
    w = rng.gamma(s.alpha);
    total += w;
  }
  const std::size_t free = s.n - s.k;
  std::vector<double> remainder(s.k);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < s.k; ++c) {
    const double share = total > 0.0 ? weights[c] / total * static_cast<double>(free)
                                     : static_cast<double>(free) / static_cast<double>(s.k);
    const auto whole = static_cast<std::size_t>(std::floor(share));
    sizes[c] = 1 + whole;
    remainder[c] = share - static_cast<double>(whole);
    assigned += whole;
  }
  std::vector<std::size_t> order(s.k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t r = 0; assigned < free; ++r, ++assigned) ++sizes[order[r % s.k]];
  return sizes;
}

}  // namespace

Matrix mixture_centers(const MixtureSpec& spec) {
  check_spec(spec);
  return place_centers(spec);
}

Dataset generate_spherical_mixture(const MixtureSpec& spec) {
  check_spec(spec);
  const Matrix centers = place_centers(spec);
  const std::vector<std::size_t> sizes = class_sizes(spec);

  Rng rng(derive_seed(spec.seed, kPoints));
  Matrix points(spec.n, spec.d);
  std::vector<int> labels(spec.n);
  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.k; ++c) {
    for (std::size_t m = 0; m < sizes[c]; ++m, ++row) {
      auto p = points.row(row);
      const auto center = centers.row(c);
      for (std::size_t j = 0; j < spec.d; ++j) p[j] = center[j] + spec.sigma * rng.normal();
      normalize_in_place(p);
      labels[row] = static_cast<int>(c);
    }
  }

  // Fisher-Yates over the rows so classes are interleaved.
  std::vector<std::size_t> perm(spec.n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = spec.n - 1; i > 0; --i) {
    std::swap(perm[i], perm[static_cast<std::size_t>(rng.below(i + 1))]);
  }
  Matrix shuffled(spec.n, spec.d);
  std::vector<int> shuffled_labels(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::ranges::copy(points.row(perm[i]), shuffled.row(i).begin());
    shuffled_labels[i] = labels[perm[i]];
  }

  std::string name = "mixture-k" + std::to_string(spec.k) + "-n" + std::to_string(spec.n) + "-d" +
                     std::to_string(spec.d) + "-seed" + std::to_string(spec.seed);
  return Dataset{EmbeddingSet(std::move(shuffled)),
                 LabelVector(std::move(shuffled_labels), spec.k), std::move(name)};
}

Clustering degrade_clustering(const Clustering& c, double noise_rate, std::uint64_t seed) {
  const std::size_t k = c.group_count();
  if (k < 2) throw Error(Errc::SingleCluster, "degradation needs at least 2 clusters");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    throw Error(Errc::InvalidArgument, "noise rate must lie in [0, 1]");
  }
  Rng rng(seed);
  std::vector<int> ids(c.ids().begin(), c.ids().end());
  std::vector<std::size_t> counts(c.sizes().begin(), c.sizes().end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!rng.bernoulli(noise_rate)) continue;
    const auto from = static_cast<std::size_t>(ids[i]);
    auto to = static_cast<std::size_t>(rng.below(k - 1));
    if (to >= from) ++to;
    ids[i] = static_cast<int>(to);
    --counts[from];
    ++counts[to];
  }

  // A returned point is back home and never moves again, so this terminates.
  for (bool repaired = true; repaired;) {
    repaired = false;
    for (std::size_t g = 0; g < k; ++g) {
      if (counts[g] != 0) continue;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (static_cast<std::size_t>(c[i]) != g) continue;
        --counts[static_cast<std::size_t>(ids[i])];
        ids[i] = static_cast<int>(g);
        ++counts[g];
        repaired = true;
        break;
      }
    }
  }
  return Clustering(std::move(ids), k);
}

PairCounts oracle_pair_counts(const LabelVector& labels, const Clustering& c) {
  if (labels.size() != c.size()) throw Error(Errc::LengthMismatch, "label and assignment lengths differ");
  if (labels.size() > 5000) {
    throw Error(Errc::TooLarge, "pair enumeration limited to n <= 5000, got " +
                                    std::to_string(labels.size()));
  }
  PairCounts out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      const bool same_class = labels[i] == labels[j];
      const bool same_cluster = c[i] == c[j];
      if (same_class && same_cluster) ++out.tp;
      else if (same_cluster) ++out.fp;
      else if (same_class) ++out.fn;
      else ++out.tn;
    }
  }
  return out;
}

}  // namespace spectralk
