#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectralk/cluster.hpp"
#include "spectralk/kestimator.hpp"
#include "spectralk/synth.hpp"
#include "spectralk_cli/report.hpp"

namespace spectralk::cli {

struct GenOptions {
  MixtureSpec spec;
  std::string out;
  std::string format = "emb1";  // or "csv"
};

struct EstimateOptions {
  std::string in;
  EstimatorConfig estimator;
  std::size_t threads = 1;
};

struct ClusterOptions {
  std::string in;
  std::string algo = "kmeans";
  std::string k = "auto";
  Linkage linkage = Linkage::Average;
  Distance distance = Distance::Cosine;
  std::size_t n_init = 10;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  bool normalize = true;
  std::string out = "assignment.txt";
  std::optional<std::string> labels;
  EstimatorConfig estimator;  // seed doubles as the k-means seed
  std::size_t threads = 1;
};

struct EvaluateOptions {
  std::string in;
  std::string assignment;
  std::optional<std::string> labels;
  Distance silhouette_distance = Distance::Euclidean;
  bool normalize = true;
  std::size_t threads = 1;
};

struct SpectrumOptions {
  std::string in;
  std::string out = "spectrum.csv";
  EstimatorConfig estimator;
  bool force_full = false;
  std::size_t threads = 1;
};

struct SweepOptions {
  std::string in;
  std::string labels;
  std::string out = "sweep.csv";
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::vector<double> noise = {0.0, 0.1, 0.2, 0.4};
  std::vector<std::string> algos = {"kmeans", "hac"};
  Linkage linkage = Linkage::Average;
  Distance distance = Distance::Cosine;
  Distance silhouette_distance = Distance::Euclidean;
  std::size_t n_init = 10;
  bool normalize = true;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

std::string to_string(Linkage l);
std::string to_string(Distance d);
std::string to_string(Balance b);

RunReport run_gen(const GenOptions& o);
RunReport run_estimate_k(const EstimateOptions& o);
RunReport run_cluster(const ClusterOptions& o);
RunReport run_evaluate(const EvaluateOptions& o);
RunReport run_spectrum(const SpectrumOptions& o);
RunReport run_sweep(const SweepOptions& o);

/// One sweep row: the (algo, k, noise) cell and its metrics.
struct SweepRow {
  std::string algo;
  std::size_t k = 0;
  double noise = 0.0;
  MetricReport metrics;
};

/// Spearman correlations between {silhouette, -dbi, chi, cohesion_ratio} and
/// {ari, nmi, homogeneity, completeness, fmi}. Undefined entries stay empty.
struct CorrelationMatrix {
  std::vector<std::string> intrinsic, extrinsic;
  std::vector<std::vector<std::optional<double>>> rho;  // [intrinsic][extrinsic]
};

CorrelationMatrix sweep_correlations(const std::vector<SweepRow>& rows);

/// Clusterings and metrics for every (algo, k, noise) cell, in that nesting order.
std::vector<SweepRow> sweep_rows(const EmbeddingSet& raw, const LabelVector& labels,
                                 const SweepOptions& o);

}  // namespace spectralk::cli
