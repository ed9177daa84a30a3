#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "spectralk/metrics.hpp"
#include "spectralk/synth.hpp"

using namespace spectralk;

namespace {

ContingencyTable table(std::vector<int> l, std::vector<int> c) {
  return contingency(Partition(std::move(l)), Partition(std::move(c)));
}

// 1-D points lifted onto the line y = 1 so no row is the zero vector;
// Euclidean geometry along x is unchanged.
Matrix line(std::vector<double> xs) {
  Matrix m(xs.size(), 2, 1.0);
  for (std::size_t i = 0; i < xs.size(); ++i) m(i, 0) = xs[i];
  return m;
}

SimilarityMatrix four_point() {
  Matrix s(4, 4, 0.1);
  for (std::size_t i = 0; i < 4; ++i) s(i, i) = 1.0;
  s(0, 1) = s(1, 0) = 0.9;
  s(2, 3) = s(3, 2) = 0.8;
  return SimilarityMatrix(s, SimilarityVariant::RectifiedCosine);
}

std::vector<int> dense(std::vector<int> raw) {
  std::vector<std::int64_t> wide(raw.begin(), raw.end());
  const Clustering c = Clustering::from_raw(wide);
  return {c.ids().begin(), c.ids().end()};
}

}  // namespace

TEST(Contingency, Examples) {
  const auto same = table({0, 0, 1, 1}, {0, 0, 1, 1});
  EXPECT_EQ(same(0, 0), 2u);
  EXPECT_EQ(same(0, 1), 0u);
  EXPECT_EQ(same(1, 1), 2u);
  const auto crossed = table({0, 0, 1, 1}, {0, 1, 0, 1});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(crossed(a, b), 1u);
  EXPECT_EQ(crossed.total(), 4u);
  EXPECT_THROW(contingency(Partition({0, 1}), Partition({0, 0, 1})), Error);
}

TEST(Ari, Examples) {
  EXPECT_DOUBLE_EQ(ari(table({0, 0, 1, 1, 2}, {0, 0, 1, 1, 2})), 1.0);
  EXPECT_DOUBLE_EQ(ari(table({0, 0, 1, 1}, {0, 1, 0, 1})), -0.5);
  EXPECT_DOUBLE_EQ(ari(table({0, 0, 0, 1, 1, 1}, {0, 0, 0, 0, 0, 0})), 0.0);
  EXPECT_THROW(ari(table({0}, {0})), Error);
  EXPECT_DOUBLE_EQ(ari(table({0, 0, 0}, {0, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(ari(table({0, 1, 2}, {0, 1, 2})), 1.0);
}

TEST(Ari, SymmetricAndRelabelInvariant) {
  const std::vector<int> l{0, 0, 1, 1, 2, 2, 2, 0};
  const std::vector<int> c{1, 1, 0, 2, 2, 0, 0, 1};
  EXPECT_DOUBLE_EQ(ari(table(l, c)), ari(table(c, l)));
  std::vector<int> relabeled(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) relabeled[i] = (c[i] + 1) % 3;
  EXPECT_DOUBLE_EQ(ari(table(l, c)), ari(table(l, relabeled)));
}

TEST(Nmi, Examples) {
  const NmiScores perfect = nmi_family(table({0, 0, 1, 1, 2}, {2, 2, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(perfect.nmi, 1.0);
  EXPECT_DOUBLE_EQ(perfect.homogeneity, 1.0);
  EXPECT_DOUBLE_EQ(perfect.completeness, 1.0);

  const NmiScores merged = nmi_family(table({0, 0, 1, 1}, {0, 0, 0, 0}));
  EXPECT_EQ(merged.homogeneity, 0.0);
  EXPECT_EQ(merged.completeness, 1.0);
  EXPECT_EQ(merged.nmi, 0.0);

  const NmiScores trivial = nmi_family(table({0, 0, 0}, {0, 0, 0}));
  EXPECT_EQ(trivial.nmi, 1.0);

  const std::vector<int> l{0, 0, 1, 1}, c{0, 0, 0, 1};
  const NmiScores s = nmi_family(table(l, c));
  const auto o = oracle::entropy_scores(l, c);
  EXPECT_NEAR(s.homogeneity, o.homogeneity, 1e-12);
  EXPECT_NEAR(s.completeness, o.completeness, 1e-12);
  EXPECT_NEAR(s.nmi, o.v_measure, 1e-12);
}

TEST(Nmi, SwappingRolesSwapsHomogeneityAndCompleteness) {
  const std::vector<int> l{0, 0, 1, 1, 2, 2, 2, 0, 1};
  const std::vector<int> c{1, 1, 0, 2, 2, 0, 0, 1, 1};
  const NmiScores a = nmi_family(table(l, c));
  const NmiScores b = nmi_family(table(c, l));
  EXPECT_NEAR(a.homogeneity, b.completeness, 1e-15);
  EXPECT_NEAR(a.completeness, b.homogeneity, 1e-15);
  EXPECT_NEAR(a.nmi, b.nmi, 1e-15);
}

TEST(Fmi, Examples) {
  EXPECT_DOUBLE_EQ(fmi(table({0, 0, 1, 1}, {1, 1, 0, 0})), 1.0);
  EXPECT_EQ(fmi(table({0, 0, 1, 1}, {0, 1, 0, 1})), 0.0);
}

TEST(PairMetrics, MatchBruteForceOnRandomLabelings) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 11;
    const int kl = 1 + int(gen() % 4), kc = 1 + int(gen() % 5);
    std::vector<int> l(n), c(n);
    for (auto& v : l) v = int(gen() % kl);
    for (auto& v : c) v = int(gen() % kc);
    l = dense(l);
    c = dense(c);
    const auto t = table(l, c);
    const auto pairs = oracle::enumerate_pairs(l, c);
    EXPECT_NEAR(ari(t), oracle::ari_from_pairs(pairs), 1e-12);
    EXPECT_NEAR(fmi(t), oracle::fmi_from_pairs(pairs), 1e-12);
    const auto e = oracle::entropy_scores(l, c);
    const NmiScores s = nmi_family(t);
    EXPECT_NEAR(s.homogeneity, e.homogeneity, 1e-12);
    EXPECT_NEAR(s.completeness, e.completeness, 1e-12);
    EXPECT_NEAR(s.nmi, e.v_measure, 1e-12);
  }
}

TEST(RelativeError, Examples) {
  EXPECT_EQ(relative_error_k(14, 14), 0.0);
  EXPECT_EQ(relative_error_k(7, 14), 0.5);
  EXPECT_EQ(relative_error_k(20, 16), 0.25);
  EXPECT_THROW(relative_error_k(3, 0), Error);
}

TEST(Cohesion, FourPointExample) {
  const CohesionComponents c = cohesion_components(four_point(), Clustering({0, 0, 1, 1}));
  EXPECT_NEAR(c.mu_intra, 0.85, 1e-15);
  EXPECT_NEAR(c.mu_global, 0.35, 1e-15);
  EXPECT_NEAR(c.ratio, 17.0 / 7.0, 1e-12);
  EXPECT_EQ(c.pairs, 2.0);
  EXPECT_EQ(c.singletons, 0u);
}

TEST(Cohesion, TrivialPartitionsGiveExactlyOne) {
  const auto s = four_point();
  EXPECT_EQ(cohesion_ratio(s, Clustering({0, 0, 0, 0})), 1.0);
  EXPECT_EQ(cohesion_ratio(s, Clustering({0, 1, 2, 3})), 1.0);

  MixtureSpec spec;
  spec.k = 3;
  spec.n = 97;
  spec.d = 5;
  spec.sigma = 0.5;
  spec.seed = 4;
  const Dataset d = generate_spherical_mixture(spec);
  std::vector<int> singletons(97);
  for (std::size_t i = 0; i < 97; ++i) singletons[i] = int(i);
  EXPECT_EQ(cohesion_ratio(d.embeddings, Clustering(std::vector<int>(97, 0))), 1.0);
  EXPECT_EQ(cohesion_ratio(d.embeddings, Clustering(singletons)), 1.0);
}

TEST(Cohesion, SingletonsContributeGlobalMean) {
  const auto s = four_point();
  // {0,1} pair plus singletons 2 and 3: (0.9 + 2 * 0.35) / 3.
  const CohesionComponents c = cohesion_components(s, Clustering({0, 0, 1, 2}));
  EXPECT_EQ(c.singletons, 2u);
  EXPECT_NEAR(c.mu_intra, (0.9 + 2 * 0.35) / 3, 1e-15);
}

TEST(Cohesion, ZeroBackgroundIsNeutral) {
  Matrix eye(3, 3);
  for (std::size_t i = 0; i < 3; ++i) eye(i, i) = 1.0;
  const SimilarityMatrix s(eye, SimilarityVariant::RectifiedCosine);
  EXPECT_EQ(cohesion_ratio(s, Clustering({0, 0, 1})), 1.0);
}

TEST(Cohesion, StreamingMatchesMatrix) {
  MixtureSpec spec;
  spec.k = 4;
  spec.n = 80;
  spec.d = 6;
  spec.sigma = 0.3;
  spec.seed = 10;
  const Dataset d = generate_spherical_mixture(spec);
  const Clustering c(std::vector<int>(d.labels->ids().begin(), d.labels->ids().end()));
  EXPECT_EQ(cohesion_ratio(d.embeddings, c), cohesion_ratio(cosine_similarity_matrix(d.embeddings), c));
  EXPECT_GT(cohesion_ratio(d.embeddings, c), 1.0);
}

TEST(Cohesion, RandomAssignmentsAverageNearOne) {
  MixtureSpec spec;
  spec.k = 5;
  spec.n = 300;
  spec.d = 16;
  spec.sigma = 0.2;
  spec.seed = 1;
  const Dataset d = generate_spherical_mixture(spec);
  const SimilarityMatrix s = cosine_similarity_matrix(d.embeddings);
  std::vector<int> ids(d.labels->ids().begin(), d.labels->ids().end());
  std::mt19937_64 gen(5);
  double sum = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::shuffle(ids.begin(), ids.end(), gen);
    sum += cohesion_ratio(s, Clustering(ids));
  }
  EXPECT_NEAR(sum / 100, 1.0, 0.05);
}

TEST(CohesionInformation, Examples) {
  const auto same = cohesion_information(0.3, 0.3);
  EXPECT_EQ(same.pmi, 0.0);
  EXPECT_EQ(same.kl, 0.0);
  const auto info = cohesion_information(0.5, 0.25);
  EXPECT_NEAR(info.pmi, std::log(2.0), 1e-15);
  EXPECT_NEAR(info.kl, 0.5 * std::log(2.0) + 0.5 * std::log(0.5 / 0.75), 1e-15);
  EXPECT_NEAR(info.kl, 0.143841, 1e-6);
  EXPECT_THROW(cohesion_information(1.0, 0.5), Error);
  EXPECT_THROW(cohesion_information(0.5, 0.0), Error);
}

TEST(Silhouette, HandComputation) {
  const EmbeddingSet e(line({0, 0.1, 10, 10.1}));
  const Clustering c({0, 0, 1, 1});
  // a = 0.1 for every point; b is the mean distance to the other pair.
  const double s0 = (10.05 - 0.1) / 10.05;
  const double s1 = (9.95 - 0.1) / 9.95;
  EXPECT_NEAR(silhouette(e, c), (s0 + s1 + s1 + s0) / 4, 1e-12);
  EXPECT_NEAR(silhouette(e, c), 0.99, 1e-3);
}

TEST(Silhouette, Degenerate) {
  EXPECT_THROW(silhouette(EmbeddingSet(line({1, 2, 3})), Clustering({0, 0, 0})), Error);
  EXPECT_EQ(silhouette(EmbeddingSet(line({2, 2, 2, 2})), Clustering({0, 1, 0, 1})), 0.0);
  // Singletons contribute 0.
  EXPECT_NEAR(silhouette(EmbeddingSet(line({0, 1, 10})), Clustering({0, 0, 1})),
              (1 - 1.0 / 10 + 1 - 1.0 / 9) / 3, 1e-12);
}

TEST(Silhouette, CosineDistanceOption) {
  Matrix m(4, 2);
  m(0, 0) = 1;
  m(1, 0) = 2;
  m(2, 1) = 1;
  m(3, 1) = 3;
  // Within-pair cosine distance 0, across 1.
  EXPECT_NEAR(silhouette(EmbeddingSet(m), Clustering({0, 0, 1, 1}), Distance::Cosine), 1.0, 1e-15);
}

TEST(DaviesBouldin, Cases) {
  EXPECT_EQ(davies_bouldin(EmbeddingSet(line({1, 1, 5, 5})), Clustering({0, 0, 1, 1})), 0.0);
  EXPECT_EQ(davies_bouldin(EmbeddingSet(line({0, 2, 0, 2})), Clustering({0, 0, 1, 1})),
            std::numeric_limits<double>::infinity());
  // Scatters 0.5 and 1, centroid distance 10.5.
  EXPECT_NEAR(davies_bouldin(EmbeddingSet(line({0, 1, 10, 12})), Clustering({0, 0, 1, 1})),
              (1.5 / 10.5 + 1.5 / 10.5) / 2, 1e-12);
  EXPECT_THROW(davies_bouldin(EmbeddingSet(line({0, 1})), Clustering({0, 0})), Error);
}

TEST(CalinskiHarabasz, Cases) {
  // Centroids 0.5 and 10.5, grand mean 5.5: B = 4 * 25 = 100, W = 4 * 0.25 = 1.
  EXPECT_NEAR(calinski_harabasz(EmbeddingSet(line({0, 1, 10, 11})), Clustering({0, 0, 1, 1})),
              (100.0 / 1) / (1.0 / 2), 1e-9);
  EXPECT_EQ(calinski_harabasz(EmbeddingSet(line({1, 1, 5, 5})), Clustering({0, 0, 1, 1})),
            std::numeric_limits<double>::infinity());
  EXPECT_THROW(calinski_harabasz(EmbeddingSet(line({1, 2, 3})), Clustering({0, 1, 2})), Error);
}

TEST(CalinskiHarabasz, TrueSplitBeatsRandomSplit) {
  MixtureSpec spec;
  spec.k = 3;
  spec.n = 150;
  spec.d = 8;
  spec.sigma = 0.1;
  spec.seed = 6;
  const Dataset d = generate_spherical_mixture(spec);
  const Clustering truth(std::vector<int>(d.labels->ids().begin(), d.labels->ids().end()));
  std::vector<int> shuffled(truth.ids().begin(), truth.ids().end());
  std::mt19937_64 gen(1);
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  EXPECT_GT(calinski_harabasz(d.embeddings, truth), calinski_harabasz(d.embeddings, Clustering(shuffled)));
}

TEST(Spearman, Cases) {
  const std::vector<double> x{1, 2, 3, 4, 5}, rev{5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(spearman(x, x), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, rev), -1.0);
  const std::vector<double> a{1, 2, 2, 3}, b{1, 3, 2, 4};
  // Ranks (1, 2.5, 2.5, 4) vs (1, 3, 2, 4).
  const std::vector<double> ra{1, 2.5, 2.5, 4}, rb{1, 3, 2, 4};
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (ra[i] - 2.5) * (rb[i] - 2.5);
    sxx += (ra[i] - 2.5) * (ra[i] - 2.5);
    syy += (rb[i] - 2.5) * (rb[i] - 2.5);
  }
  EXPECT_NEAR(spearman(a, b), sxy / std::sqrt(sxx * syy), 1e-12);
  EXPECT_EQ(average_ranks(a), ra);
  const std::vector<double> flat{2, 2, 2};
  EXPECT_THROW(spearman(flat, std::vector<double>{1, 2, 3}), Error);
  EXPECT_THROW(spearman(x, std::vector<double>{1, 2}), Error);
}

TEST(Evaluate, OptionalFields) {
  const EmbeddingSet e(line({0, 1, 10, 11}));
  const Clustering c({0, 0, 1, 1});
  const MetricReport intrinsic = evaluate(e, c, nullptr);
  EXPECT_FALSE(intrinsic.ari);
  EXPECT_FALSE(intrinsic.k_true);
  EXPECT_TRUE(intrinsic.silhouette);
  EXPECT_TRUE(intrinsic.dbi);
  EXPECT_TRUE(intrinsic.chi);
  EXPECT_TRUE(intrinsic.cohesion_ratio);
  EXPECT_EQ(intrinsic.k_pred, 2u);

  const LabelVector l({0, 0, 1, 1});
  const MetricReport full = evaluate(e, c, &l);
  EXPECT_EQ(*full.ari, 1.0);
  EXPECT_EQ(*full.nmi, 1.0);
  EXPECT_EQ(*full.fmi, 1.0);
  EXPECT_EQ(*full.re_k, 0.0);
  EXPECT_EQ(*full.k_true, 2u);

  const MetricReport one = evaluate(e, Clustering({0, 0, 0, 0}), &l);
  EXPECT_FALSE(one.silhouette);
  EXPECT_FALSE(one.dbi);
  EXPECT_EQ(*one.cohesion_ratio, 1.0);
}
