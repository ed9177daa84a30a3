#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spectralk/cluster.hpp"
#include "spectralk/core.hpp"
#include "spectralk/similarity.hpp"

namespace spectralk {

/// counts(a, b) = number of items in row group a and column group b.
class ContingencyTable {
 public:
  ContingencyTable(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t operator()(std::size_t a, std::size_t b) const noexcept {
    return counts_[a * cols_ + b];
  }
  std::span<const std::uint64_t> row_sums() const noexcept { return row_sums_; }
  std::span<const std::uint64_t> col_sums() const noexcept { return col_sums_; }
  std::uint64_t total() const noexcept { return total_; }

  void add(std::size_t a, std::size_t b) noexcept;

 private:
  std::size_t rows_, cols_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> row_sums_, col_sums_;
  std::uint64_t total_ = 0;
};

/// Rows are the classes of `labels`, columns the clusters of `clusters`. Any
/// two partitions of the same items may be passed. Throws LengthMismatch.
ContingencyTable contingency(const Partition& labels, const Partition& clusters);

/// Adjusted Rand index from pair counts. Throws Degenerate for fewer than 2 items.
/// When both partitions are trivial in the same way (expected index equals the
/// maximum), returns 1 if they agree and 0 otherwise.
double ari(const ContingencyTable& t);

struct NmiScores {
  double nmi = 0.0;
  double homogeneity = 0.0;
  double completeness = 0.0;
};

/// V-measure family with natural-log entropies, NMI normalized by the arithmetic
/// mean of H(class) and H(cluster). H(class) = 0 gives homogeneity 1, H(cluster) = 0
/// gives completeness 1, and both zero gives NMI 1.
NmiScores nmi_family(const ContingencyTable& t);

/// Fowlkes-Mallows index TP / sqrt((TP + FP)(TP + FN)); 0 when TP = 0.
double fmi(const ContingencyTable& t);

/// |k_hat - k_true| / k_true. Throws InvalidArgument when k_true = 0.
double relative_error_k(std::size_t k_hat, std::size_t k_true);

struct CohesionComponents {
  double mu_global = 0.0;  ///< mean similarity over all unordered pairs
  double mu_intra = 0.0;   ///< intra-cluster mean with singleton virtual pairs
  double pairs = 0.0;      ///< sum_k C(|C_k|, 2) + number of singletons
  std::size_t singletons = 0;
  double ratio = 0.0;
};

/// Cohesion ratio mu_intra / mu_global. Each singleton contributes one virtual
/// pair with similarity mu_global. Returns ratio 1 when mu_global < 1e-15.
/// Throws LengthMismatch, TooFewPoints.
CohesionComponents cohesion_components(const SimilarityMatrix& s, const Clustering& c);
double cohesion_ratio(const SimilarityMatrix& s, const Clustering& c);

/// Same quantity with rectified cosine similarities computed on the fly (O(n) memory).
CohesionComponents cohesion_components(const EmbeddingSet& e, const Clustering& c);
double cohesion_ratio(const EmbeddingSet& e, const Clustering& c);

struct CohesionInformation {
  double pmi = 0.0;  ///< ln(mu_i / mu_g)
  double kl = 0.0;   ///< KL(Bernoulli(mu_i) || Bernoulli(mu_g))
};

/// Throws OutOfRange unless both arguments lie strictly inside (0, 1).
CohesionInformation cohesion_information(double mu_i, double mu_g);

/// Mean silhouette. Singleton points score 0, as do points with a(i) = b(i) = 0.
/// Throws SingleCluster when K < 2, TooFewPoints when n < 3.
double silhouette(const EmbeddingSet& e, const Clustering& c,
                  Distance distance = Distance::Euclidean);

/// Davies-Bouldin index with Euclidean centroid distances. A pair of coincident
/// centroids with positive combined scatter yields +infinity. Throws SingleCluster.
double davies_bouldin(const EmbeddingSet& e, const Clustering& c);

/// Calinski-Harabasz variance ratio. Zero within-cluster dispersion yields
/// +infinity. Throws SingleCluster (K < 2) and Saturated (n = K).
double calinski_harabasz(const EmbeddingSet& e, const Clustering& c);

/// Spearman rank correlation (average ranks for ties). Throws LengthMismatch,
/// TooFewPoints (n < 3) and ZeroVariance.
double spearman(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based) with ties sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

struct MetricReport {
  std::optional<double> ari, nmi, homogeneity, completeness, fmi, re_k;
  std::optional<double> silhouette, dbi, chi, cohesion_ratio;
  std::optional<std::size_t> k_true;
  std::size_t k_pred = 0;
};

struct EvaluationOptions {
  Distance silhouette_distance = Distance::Euclidean;
};

/// Intrinsic metrics always (those undefined for K = 1 stay empty); extrinsic
/// metrics only when labels are given.
MetricReport evaluate(const EmbeddingSet& e, const Clustering& c, const LabelVector* labels,
                      const EvaluationOptions& options = {});

}  // namespace spectralk
