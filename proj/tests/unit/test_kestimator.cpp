#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spectralk/kestimator.hpp"
#include "spectralk/synth.hpp"

using namespace spectralk;

namespace {

EstimatorConfig defaults() { return EstimatorConfig{}; }

Spectrum from_fn(std::size_t n, auto&& f) {
  std::vector<double> v(n);
  for (std::size_t i = 1; i <= n; ++i) v[i - 1] = f(i);
  return Spectrum(std::move(v));
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::InvalidArgument;
}

}  // namespace

TEST(Deltas, StepSpectrum) {
  const DeltaSeries ds = spectral_deltas(Spectrum({0, 0, 0, 1, 1, 1}), 3, 1e-12);
  EXPECT_EQ(ds.first_index(), 4u);
  EXPECT_EQ(ds.last_index(), 6u);
  EXPECT_DOUBLE_EQ(ds.at(4), 1e12);
  EXPECT_EQ(ds.at(5), 0.0);
  EXPECT_EQ(ds.at(6), 0.0);
}

TEST(Deltas, ConstantSpectrumIsFlat) {
  const DeltaSeries ds = spectral_deltas(Spectrum(std::vector<double>(20, 0.7)), 3, 1e-12);
  for (double d : ds.values()) EXPECT_EQ(d, 0.0);
}

TEST(Deltas, LinearSpectrumClosedForm) {
  const std::size_t n = 50;
  const double eps = 1e-12;
  const Spectrum sp = from_fn(n, [&](std::size_t i) { return double(i) / double(n); });
  const DeltaSeries ds = spectral_deltas(sp, 3, eps);
  for (std::size_t i : {4u, 17u, 50u}) {
    // Mean of (i-3)/n, (i-2)/n, (i-1)/n is (i-2)/n.
    const double expect = (1.0 / n) / (double(i - 2) / n + eps);
    EXPECT_NEAR(ds.at(i), expect, 1e-12 * expect);
  }
  for (std::size_t i = ds.first_index() + 1; i <= ds.last_index(); ++i) EXPECT_LT(ds.at(i), ds.at(i - 1));
}

TEST(Deltas, TooShort) {
  EXPECT_EQ(code_of([] { spectral_deltas(Spectrum({0, 1, 2, 3}), 3, 1e-12); }),
            Errc::SpectrumTooShort);
}

TEST(Threshold, ConstantRegion) {
  // window 1, n = 8: region is indices 2..4.
  const DeltaSeries ds({0.25, 0.25, 0.25, 9.0, 9.0, 9.0, 9.0}, 1, 1e-12);
  EXPECT_DOUBLE_EQ(adaptive_threshold(ds), 0.25);
}

TEST(Threshold, TwoPointHandComputation) {
  const double c = 0.3, eps = 1e-12;
  // window 1, n = 6: region is indices 2..3.
  const DeltaSeries ds({0.0, 2 * c, 5.0, 5.0, 5.0}, 1, eps);
  EXPECT_NEAR(adaptive_threshold(ds), c * (1 + c / (c + eps)), 1e-15);
}

TEST(Threshold, EmptyRegion) {
  const DeltaSeries ds({1.0}, 3, 1e-12);
  EXPECT_EQ(code_of([&] { adaptive_threshold(ds); }), Errc::InsufficientStatistics);
}

TEST(Threshold, CandidateRegionBounds) {
  const IndexRange r = candidate_region(30, 3);
  EXPECT_EQ(r.first, 4u);
  EXPECT_EQ(r.last, 15u);
  EXPECT_EQ(r.count(), 12u);
  EXPECT_EQ(candidate_region(9, 3).count(), 1u);
}

TEST(EstimateFromSpectrum, IdealThreeBlocks) {
  const SimilarityMatrix s(oracle::block_similarity({10, 10, 10}), SimilarityVariant::RectifiedCosine);
  const Spectrum sp = eigenvalues_symmetric(normalized_laplacian(s));
  const SpectrumAnalysis a = analyze_spectrum(sp, defaults());
  EXPECT_EQ(a.jump_index, 4u);
  EXPECT_EQ(a.k_hat, 3u);
  EXPECT_FALSE(a.fallback);
}

TEST(EstimateFromSpectrum, SingleKnee) {
  for (std::size_t k : {4u, 7u, 12u}) {
    const Spectrum sp = from_fn(100, [&](std::size_t i) {
      return i <= k ? 0.001 * double(i) : 0.8 + 0.002 * double(i - k - 1);
    });
    EXPECT_EQ(estimate_k_from_spectrum(sp, defaults()), k);
  }
}

TEST(EstimateFromSpectrum, FallbackWhenRegionIsFlat) {
  const Spectrum constant(std::vector<double>(40, 0.5));
  const SpectrumAnalysis a = analyze_spectrum(constant, defaults());
  EXPECT_TRUE(a.fallback);
  EXPECT_EQ(a.jump_index, 0u);
  EXPECT_EQ(a.k_hat, 5u);

  // The only jump sits beyond the candidate region.
  const Spectrum late = from_fn(40, [](std::size_t i) { return i <= 25 ? 1.0 : 1.5; });
  EstimatorConfig cfg = defaults();
  cfg.k_default = 9;
  EXPECT_EQ(estimate_k_from_spectrum(late, cfg), 9u);
}

TEST(EstimateFromSpectrum, JumpAtFirstCandidateGivesAtLeastOne) {
  // With w = 1 the first candidate is i = 2, i.e. k = 1.
  const Spectrum sp = from_fn(20, [](std::size_t i) { return i == 1 ? 0.0 : 1.0 + 1e-3 * double(i); });
  EstimatorConfig cfg = defaults();
  cfg.window = 1;
  EXPECT_EQ(estimate_k_from_spectrum(sp, cfg), 1u);
}

TEST(Config, Validation) {
  EstimatorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.window = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.tau = 9;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.k_default = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.k_default = 501;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.epsilon = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(ReplicateCount, LogRule) {
  EXPECT_EQ(replicate_count(4096), 120u);
  EXPECT_EQ(replicate_count(1000), 100u);
  EXPECT_EQ(replicate_count(20000), 143u);
  EXPECT_EQ(replicate_count(1), 1u);
}

TEST(EstimateK, SmallNUsesFullData) {
  MixtureSpec spec;
  spec.k = 4;
  spec.n = 500;
  spec.d = 32;
  spec.sigma = 0.15;
  spec.seed = 3;
  const Dataset d = generate_spherical_mixture(spec);
  const KEstimate est = estimate_k(d.embeddings, defaults());
  ASSERT_EQ(est.replicate_estimates.size(), 1u);
  const std::size_t direct = estimate_k_from_spectrum(compute_eigenvalues(d.embeddings, false), defaults());
  EXPECT_EQ(est.k_hat, direct);
  EXPECT_EQ(est.k_hat, 4u);
  EXPECT_EQ(est.k_raw_mean, double(direct));
}

TEST(EstimateK, ThreadCountDoesNotChangeResult) {
  MixtureSpec spec;
  spec.k = 3;
  spec.n = 1200;
  spec.d = 16;
  spec.sigma = 0.15;
  spec.seed = 8;
  const Dataset d = generate_spherical_mixture(spec);
  EstimatorConfig cfg;
  cfg.tau = 120;
  cfg.seed = 99;
  const KEstimate one = estimate_k(d.embeddings, cfg, 1);
  ASSERT_EQ(one.replicate_estimates.size(), replicate_count(1200));
  for (std::size_t threads : {2u, 8u}) {
    const KEstimate many = estimate_k(d.embeddings, cfg, threads);
    EXPECT_EQ(many.replicate_estimates, one.replicate_estimates);
    EXPECT_EQ(many.k_raw_mean, one.k_raw_mean);
    EXPECT_EQ(many.k_hat, one.k_hat);
    EXPECT_EQ(many.fallback_fraction, one.fallback_fraction);
  }
  EXPECT_LE(one.k_hat, cfg.tau / 2);
}

TEST(EstimateK, PositiveRowScalingInvariance) {
  MixtureSpec spec;
  spec.k = 3;
  spec.n = 600;
  spec.d = 16;
  spec.sigma = 0.15;
  spec.seed = 2;
  const Dataset d = generate_spherical_mixture(spec);
  Matrix scaled = d.embeddings.matrix();
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (std::size_t i = 0; i < scaled.rows(); ++i) {
    const double c = u(gen);
    for (double& v : scaled.row(i)) v *= c;
  }
  EstimatorConfig cfg;
  cfg.tau = 150;
  const KEstimate a = estimate_k(d.embeddings, cfg);
  const KEstimate b = estimate_k(EmbeddingSet(scaled), cfg);
  EXPECT_EQ(a.replicate_estimates, b.replicate_estimates);
  EXPECT_EQ(a.k_hat, b.k_hat);
}

TEST(EstimateK, TooFewPoints) {
  Matrix m(9, 2);
  for (std::size_t i = 0; i < 9; ++i) m(i, 0) = 1.0 + double(i), m(i, 1) = 1.0;
  EXPECT_EQ(code_of([&] { estimate_k(EmbeddingSet(m), defaults()); }), Errc::SpectrumTooShort);
}

TEST(EstimateFromSpectra, RoundsHalfAwayFromZero) {
  // Two replicates: knees at 2 and 3 -> mean 2.5 -> 3.
  auto knee = [](std::size_t k) {
    return from_fn(60, [k](std::size_t i) { return i <= k ? 0.0 : 1.0 + 1e-3 * double(i); });
  };
  const std::vector<Spectrum> spectra{knee(2), knee(3)};
  EstimatorConfig cfg;
  cfg.window = 1;
  const KEstimate est = estimate_from_spectra(spectra, cfg);
  EXPECT_EQ(est.replicate_estimates, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(est.k_raw_mean, 2.5);
  EXPECT_EQ(est.k_hat, 3u);
  EXPECT_EQ(est.fallback_fraction, 0.0);
}
