#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spectralk/core.hpp"
#include "spectralk/spectral.hpp"

namespace spectralk {

/// Windowed, locally normalized eigenvalue differences
///   delta_i = |lambda_i - lambda_{i-1}| / (mean(lambda_{i-w} .. lambda_{i-1}) + epsilon)
/// defined for 1-based indices i = w+1 .. n of an ascending spectrum.
class DeltaSeries {
 public:
  /// `values[0]` is delta_{w+1}; the spectrum length is w + values.size().
  DeltaSeries(std::vector<double> values, std::size_t window, double epsilon);

  std::size_t window() const noexcept { return window_; }
  double epsilon() const noexcept { return epsilon_; }
  std::size_t first_index() const noexcept { return window_ + 1; }
  /// n, the length of the underlying spectrum.
  std::size_t last_index() const noexcept { return window_ + values_.size(); }
  /// delta_i for first_index() <= i <= last_index().
  double at(std::size_t i) const noexcept { return values_[i - first_index()]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
  std::size_t window_;
  double epsilon_;
};

struct EstimatorConfig {
  std::size_t tau = 1000;      ///< subsample cap
  std::size_t window = 3;      ///< moving-average window w
  std::size_t k_default = 5;   ///< fallback when no jump clears the threshold
  double epsilon = 1e-12;
  bool use_zscore = false;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument unless tau >= 2w + 4, w >= 1, 1 <= k_default <= tau / 2
  /// and epsilon > 0.
  void validate() const;
};

struct KEstimate {
  std::size_t k_hat = 0;
  double k_raw_mean = 0.0;
  std::vector<std::size_t> replicate_estimates;
  /// Share of replicates whose scan found no over-threshold index.
  double fallback_fraction = 0.0;
};

/// Everything the spectrum scan produces; enough to redraw the spectrum plot.
struct SpectrumAnalysis {
  DeltaSeries deltas;
  double threshold = 0.0;
  std::size_t k_hat = 0;
  /// 1-based index of the over-threshold delta, or 0 when the fallback was used.
  std::size_t jump_index = 0;
  bool fallback = false;
};

DeltaSeries spectral_deltas(const Spectrum& sp, std::size_t window, double epsilon);

/// Candidate region of the scan: 1-based indices w+1 .. floor(n/2).
struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive; empty when last < first
  std::size_t count() const noexcept { return last >= first ? last - first + 1 : 0; }
};
IndexRange candidate_region(std::size_t n, std::size_t window) noexcept;

/// T = E[delta] * (1 + sd[delta] / (E[delta] + epsilon)), with the mean and
/// population standard deviation taken over the candidate region.
/// Throws InsufficientStatistics when the region holds fewer than 2 indices.
double adaptive_threshold(const DeltaSeries& ds);

/// Reverse scan from floor(n/2) down to w+1; the first delta_i above the
/// threshold gives k = max(i - 1, 1), otherwise k_default.
SpectrumAnalysis analyze_spectrum(const Spectrum& sp, const EstimatorConfig& cfg);
std::size_t estimate_k_from_spectrum(const Spectrum& sp, const EstimatorConfig& cfg);

/// round(log2(n) * 10), at least 1.
std::size_t replicate_count(std::size_t n) noexcept;

/// The spectra estimate_k would analyse, in replicate order: one full-data
/// spectrum when n <= tau, otherwise replicate_count(n) spectra of uniform
/// size-tau subsets, replicate i seeded with derive_seed(cfg.seed, i).
/// Independent of `threads`.
std::vector<Spectrum> replicate_spectra(const EmbeddingSet& e, const EstimatorConfig& cfg,
                                        std::size_t threads = 1);

/// Aggregates per-replicate scans (in order) into a KEstimate.
KEstimate estimate_from_spectra(std::span<const Spectrum> spectra, const EstimatorConfig& cfg);

/// Adaptive cluster-count estimation over the full data or a replicate ensemble.
/// Bit-identical for any `threads` value.
KEstimate estimate_k(const EmbeddingSet& e, const EstimatorConfig& cfg, std::size_t threads = 1);

}  // namespace spectralk
