#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>

#include "spectralk/core.hpp"

namespace spectralk {

enum class Balance { Equal, Dirichlet };

struct MixtureSpec {
  std::size_t k = 3;
  std::size_t n = 300;
  std::size_t d = 16;
  /// Standard deviation of the isotropic noise added to a center before renormalizing.
  double sigma = 0.15;
  /// Minimum pairwise angle between centers, radians.
  double min_sep = std::numbers::pi / 6.0;
  Balance balance = Balance::Equal;
  /// Concentration of the Dirichlet class proportions (Balance::Dirichlet only).
  double alpha = 1.0;
  std::uint64_t seed = 0;
};

/// Unit-sphere mixture: k centers drawn uniformly with pairwise angles >= min_sep
/// (rejection sampling, 10000 draws in total), points normalize(center + sigma * N(0, I)),
/// emitted in shuffled order with labels attached.
/// Equal balance gives the first n mod k classes one extra point; Dirichlet balance
/// gives every class at least one point.
/// Throws InvalidArgument for a bad spec and InfeasibleSeparation when placement fails.
Dataset generate_spherical_mixture(const MixtureSpec& spec);

/// Centers only, in class order (same draws as generate_spherical_mixture).
Matrix mixture_centers(const MixtureSpec& spec);

/// Reassigns each point with probability noise_rate to a uniformly chosen other
/// cluster. A cluster left empty gets back its lowest-index original member.
/// Requires K >= 2 and noise_rate in [0, 1].
Clustering degrade_clustering(const Clustering& c, double noise_rate, std::uint64_t seed);

struct PairCounts {
  std::uint64_t tp = 0;  ///< same class, same cluster
  std::uint64_t fp = 0;  ///< different class, same cluster
  std::uint64_t fn = 0;  ///< same class, different cluster
  std::uint64_t tn = 0;  ///< different class, different cluster
};

/// Brute-force enumeration of all unordered pairs. Throws TooLarge for n > 5000.
PairCounts oracle_pair_counts(const LabelVector& labels, const Clustering& c);

}  // namespace spectralk
