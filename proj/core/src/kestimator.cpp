#include "spectralk/kestimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectralk/parallel.hpp"
#include "spectralk/rng.hpp"

namespace spectralk {

DeltaSeries::DeltaSeries(std::vector<double> values, std::size_t window, double epsilon)
    : values_(std::move(values)), window_(window), epsilon_(epsilon) {
  if (window_ < 1) throw Error(Errc::InvalidArgument, "window must be at least 1");
}

void EstimatorConfig::validate() const {
  if (window < 1) throw Error(Errc::InvalidArgument, "window must be at least 1");
  if (tau < 2 * window + 4) {
    throw Error(Errc::InvalidArgument, "tau must be at least 2*window + 4");
  }
  if (k_default < 1 || k_default > tau / 2) {
    throw Error(Errc::InvalidArgument, "k_default must lie in [1, tau/2]");
  }
  if (!(epsilon > 0.0)) throw Error(Errc::InvalidArgument, "epsilon must be positive");
}

DeltaSeries spectral_deltas(const Spectrum& sp, std::size_t window, double epsilon) {
  if (window < 1) throw Error(Errc::InvalidArgument, "window must be at least 1");
  const std::size_t n = sp.size();
  if (n < window + 2) {
    throw Error(Errc::SpectrumTooShort, "spectrum of length " + std::to_string(n) +
                                            " is too short for window " + std::to_string(window));
  }
  const auto lambda = sp.values();
  std::vector<double> deltas;
  deltas.reserve(n - window);
  // 1-based i maps to lambda[i - 1].
  for (std::size_t i = window + 1; i <= n; ++i) {
    double window_sum = 0.0;
    for (std::size_t j = i - window; j <= i - 1; ++j) window_sum += lambda[j - 1];
    const double local_mean = window_sum / static_cast<double>(window);
    deltas.push_back(std::abs(lambda[i - 1] - lambda[i - 2]) / (local_mean + epsilon));
  }
  return DeltaSeries(std::move(deltas), window, epsilon);
}

IndexRange candidate_region(std::size_t n, std::size_t window) noexcept {
  return IndexRange{window + 1, n / 2};
}

double adaptive_threshold(const DeltaSeries& ds) {
  const IndexRange region = candidate_region(ds.last_index(), ds.window());
  const std::size_t count = region.count();
  if (count < 2) {
    throw Error(Errc::InsufficientStatistics,
                "candidate region [" + std::to_string(region.first) + ", " +
                    std::to_string(region.last) + "] holds fewer than 2 deltas");
  }
  double sum = 0.0;
  for (std::size_t i = region.first; i <= region.last; ++i) sum += ds.at(i);
  const double mean = sum / static_cast<double>(count);
  double sq = 0.0;
  for (std::size_t i = region.first; i <= region.last; ++i) {
    const double dev = ds.at(i) - mean;
    sq += dev * dev;
  }
  const double sd = std::sqrt(sq / static_cast<double>(count));
  return mean * (1.0 + sd / (mean + ds.epsilon()));
}

SpectrumAnalysis analyze_spectrum(const Spectrum& sp, const EstimatorConfig& cfg) {
  DeltaSeries deltas = spectral_deltas(sp, cfg.window, cfg.epsilon);
  const double threshold = adaptive_threshold(deltas);
  SpectrumAnalysis out{std::move(deltas), threshold, cfg.k_default, 0, true};
  const IndexRange region = candidate_region(sp.size(), cfg.window);
  for (std::size_t i = region.last; i >= region.first; --i) {
    if (out.deltas.at(i) > threshold) {
      out.k_hat = std::max<std::size_t>(i - 1, 1);
      out.jump_index = i;
      out.fallback = false;
      break;
    }
  }
  return out;
}

std::size_t estimate_k_from_spectrum(const Spectrum& sp, const EstimatorConfig& cfg) {
  return analyze_spectrum(sp, cfg).k_hat;
}

std::size_t replicate_count(std::size_t n) noexcept {
  if (n < 2) return 1;
  const auto r = std::llround(std::log2(static_cast<double>(n)) * 10.0);
  return static_cast<std::size_t>(std::max<long long>(r, 1));
}

std::vector<Spectrum> replicate_spectra(const EmbeddingSet& e, const EstimatorConfig& cfg,
                                        std::size_t threads) {
  cfg.validate();
  const std::size_t n = e.size();
  if (n < 2 * cfg.window + 4) {
    throw Error(Errc::SpectrumTooShort, "need at least 2*window + 4 points, got " +
                                            std::to_string(n));
  }
  if (n <= cfg.tau) return {compute_eigenvalues(e, cfg.use_zscore)};

  const std::size_t r = replicate_count(n);
  std::vector<Spectrum> spectra(r, Spectrum({}));
  parallel_for(r, threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i));
    const auto rows = rng.sample_without_replacement(n, cfg.tau);
    spectra[i] = compute_eigenvalues(e.subset(rows), cfg.use_zscore);
  });
  return spectra;
}

KEstimate estimate_from_spectra(std::span<const Spectrum> spectra, const EstimatorConfig& cfg) {
  if (spectra.empty()) throw Error(Errc::InvalidArgument, "no spectra to aggregate");
  KEstimate out;
  out.replicate_estimates.reserve(spectra.size());
  std::size_t fallbacks = 0;
  double sum = 0.0;
  for (const Spectrum& sp : spectra) {
    const SpectrumAnalysis a = analyze_spectrum(sp, cfg);
    out.replicate_estimates.push_back(a.k_hat);
    fallbacks += a.fallback ? 1 : 0;
    sum += static_cast<double>(a.k_hat);
  }
  const double r = static_cast<double>(spectra.size());
  out.k_raw_mean = sum / r;
  out.k_hat = static_cast<std::size_t>(std::max<long long>(1, std::llround(out.k_raw_mean)));
  out.fallback_fraction = static_cast<double>(fallbacks) / r;
  return out;
}

KEstimate estimate_k(const EmbeddingSet& e, const EstimatorConfig& cfg, std::size_t threads) {
  const auto spectra = replicate_spectra(e, cfg, threads);
  return estimate_from_spectra(spectra, cfg);
}

}  // namespace spectralk
