#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace spectralk {

/// One splitmix64 step on `state`.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Sub-seed for stream `index` of a run seeded with `seed`:
/// splitmix64(splitmix64(seed ^ 0x9e3779b97f4a7c15) + index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Seeded generator with portable sampling routines. The std distributions are
/// implementation-defined, so everything is derived from raw mt19937_64 words.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound), bound > 0, rejection-sampled (unbiased).
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// `count` distinct indices drawn uniformly from [0, n), sorted ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spectralk
