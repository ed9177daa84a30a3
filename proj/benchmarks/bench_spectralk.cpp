#include <benchmark/benchmark.h>

#include "spectralk/kestimator.hpp"
#include "spectralk/metrics.hpp"
#include "spectralk/rng.hpp"
#include "spectralk/similarity.hpp"
#include "spectralk/spectral.hpp"
#include "spectralk/synth.hpp"

using namespace spectralk;

namespace {

Dataset mixture(std::size_t k, std::size_t n, std::size_t d) {
  MixtureSpec s;
  s.k = k;
  s.n = n;
  s.d = d;
  s.sigma = 0.2;
  s.seed = 42;
  return generate_spherical_mixture(s);
}

Matrix random_symmetric(std::size_t n) {
  Rng rng(7);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform() * 2.0 - 1.0;
  }
  return m;
}

}  // namespace

static void BM_Eigenvalues(benchmark::State& state) {
  const Matrix m = random_symmetric(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_symmetric(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_CosineSimilarity(benchmark::State& state) {
  const Dataset d = mixture(5, static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(cosine_similarity_matrix(d.embeddings));
}
BENCHMARK(BM_CosineSimilarity)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_SpectrumPipeline(benchmark::State& state) {
  const Dataset d = mixture(5, static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(compute_eigenvalues(d.embeddings, false));
}
BENCHMARK(BM_SpectrumPipeline)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

// Subsampled path: replicate_count(n) decompositions of tau x tau.
static void BM_EstimateK(benchmark::State& state) {
  const Dataset d = mixture(5, static_cast<std::size_t>(state.range(0)), 32);
  EstimatorConfig cfg;
  cfg.tau = 200;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_k(d.embeddings, cfg));
}
BENCHMARK(BM_EstimateK)->Arg(400)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_CohesionRatio(benchmark::State& state) {
  const Dataset d = mixture(5, static_cast<std::size_t>(state.range(0)), 64);
  const Clustering c(std::vector<int>(d.labels->ids().begin(), d.labels->ids().end()));
  for (auto _ : state) benchmark::DoNotOptimize(cohesion_ratio(d.embeddings, c));
}
BENCHMARK(BM_CohesionRatio)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_Silhouette(benchmark::State& state) {
  const Dataset d = mixture(5, static_cast<std::size_t>(state.range(0)), 64);
  const Clustering c(std::vector<int>(d.labels->ids().begin(), d.labels->ids().end()));
  for (auto _ : state) benchmark::DoNotOptimize(silhouette(d.embeddings, c));
}
BENCHMARK(BM_Silhouette)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
