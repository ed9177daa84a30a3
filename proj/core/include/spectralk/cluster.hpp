#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spectralk/core.hpp"

namespace spectralk {

struct KMeansConfig {
  std::size_t k = 2;
  std::size_t n_init = 10;
  std::size_t max_iter = 300;
  /// Stop when the summed squared centroid shift falls below tol * mean feature variance.
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  Clustering clustering;
  Matrix centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
  /// Inertia after every assignment step of the winning restart.
  std::vector<double> inertia_trace;
};

/// Lloyd iterations from k-means++ seeds, best of n_init restarts (lowest inertia,
/// earliest restart on ties). Empty clusters take the point farthest from its centroid.
/// Throws KTooLarge when k > n.
KMeansResult kmeans(const EmbeddingSet& e, const KMeansConfig& cfg);

enum class Linkage { Average, Complete, Single };
enum class Distance { Cosine, Euclidean };

struct HacConfig {
  std::size_t k = 2;
  Linkage linkage = Linkage::Average;
  Distance distance = Distance::Cosine;
};

struct Merge {
  std::size_t left = 0;   ///< representative (smallest member index) of the surviving cluster
  std::size_t right = 0;  ///< representative of the absorbed cluster; left < right
  double height = 0.0;
};

/// Full agglomeration history: n - 1 merges in execution order.
struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;

  /// Clustering after the first leaves - k merges; clusters are numbered by
  /// their smallest member index. Throws KTooLarge unless 1 <= k <= leaves.
  Clustering cut(std::size_t k) const;
};

/// Greedy agglomeration with Lance-Williams updates; the closest active pair
/// is merged, ties going to the lexicographically smallest (i, j).
Dendrogram hac_dendrogram(const EmbeddingSet& e, Linkage linkage, Distance distance);

Clustering hac(const EmbeddingSet& e, const HacConfig& cfg);

double pairwise_distance(std::span<const double> a, std::span<const double> b, Distance distance);

}  // namespace spectralk
