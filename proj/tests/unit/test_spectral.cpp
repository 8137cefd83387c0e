#include <gtest/gtest.h>

#include <cmath>

#include "fortify/error.hpp"
#include "fortify/spectral.hpp"
#include "oracles.hpp"

using namespace fortify;

TEST(Lambda, KnownFamilies) {
  EXPECT_NEAR(spectral_lambda(complete_bipartite(2, 2)).lambda, 0.0, 1e-12);
  EXPECT_NEAR(spectral_lambda(complete_bipartite(5, 5)).lambda, 0.0, 1e-12);
  EXPECT_NEAR(spectral_lambda(perfect_matching(6)).lambda, 1.0, 1e-12);
  EXPECT_NEAR(spectral_lambda(bipartite_cycle(8)).lambda, std::cos(M_PI / 8), 1e-9);
  EXPECT_NEAR(spectral_lambda(bipartite_cycle(4)).lambda, std::sqrt(0.5), 1e-9);
}

TEST(Lambda, NonSquareCompleteIsZero) {
  EXPECT_NEAR(spectral_lambda(complete_bipartite(3, 6)).lambda, 0.0, 1e-12);
  EXPECT_NEAR(spectral_lambda(complete_bipartite(6, 2)).lambda, 0.0, 1e-12);
}

TEST(Lambda, MatchesSymmetricEigenOracle) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 4 + seed % 6;
    const std::size_t m = (seed % 3 == 0) ? 2 * n : n;
    const auto h = random_biregular(n, m, 2 + seed % 3 * (m / n), seed);
    EXPECT_NEAR(spectral_lambda(h).lambda, oracle::lambda(h), 1e-8) << "seed " << seed;
  }
}

TEST(Lambda, PowerIterationAgreesWithSvd) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto h = random_biregular(20, 20, 3, seed);
    PowerIterationOptions p;
    p.tolerance = 1e-12;
    const auto a = spectral_lambda(h);
    const auto b = spectral_lambda(h, LambdaMethod::kPowerIteration, p);
    EXPECT_NEAR(a.lambda, b.lambda, 1e-6);
    EXPECT_EQ(b.method, LambdaMethod::kPowerIteration);
  }
}

TEST(Lambda, RequiresBiregular) {
  EXPECT_THROW(spectral_lambda(BipartiteGraph(2, 2, {{0, 0}, {0, 1}, {1, 0}})), Error);
}

TEST(Adjacency, ColumnsAreStochastic) {
  const auto h = random_biregular(6, 3, 2, 5);
  const auto a = normalized_adjacency(h);
  ASSERT_EQ(a.rows(), 3);
  ASSERT_EQ(a.cols(), 6);
  for (Eigen::Index j = 0; j < a.cols(); ++j) EXPECT_NEAR(a.col(j).sum(), 1.0, 1e-12);
}

TEST(RandomBiregular, DegreesAndDeterminism) {
  const auto h = random_biregular(12, 8, 4, 99);
  EXPECT_TRUE(h.is_biregular());
  EXPECT_EQ(h.left_degree(), 4U);
  EXPECT_EQ(h.right_degree(), 6U);
  EXPECT_EQ(h, random_biregular(12, 8, 4, 99));
  EXPECT_NE(h, random_biregular(12, 8, 4, 100));
  EXPECT_THROW(random_biregular(5, 3, 2, 1), Error);
}

TEST(RandomExpander, MeetsTargetOrFails) {
  const auto ex = random_expander(16, 16, 4, 3, 0.9);
  EXPECT_LE(ex.certificate.lambda, 0.9);
  EXPECT_NEAR(ex.certificate.lambda, oracle::lambda(ex.graph), 1e-9);
  EXPECT_THROW(random_expander(16, 16, 2, 3, 0.01, 5), Error);
}

TEST(Mixing, DiscrepancyBoundedByLambda) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto h = random_biregular(8, 8, 3, seed);
    const double lam = spectral_lambda(h).lambda;
    const auto scan = scan_mixing(h);
    EXPECT_TRUE(scan.exhaustive);
    EXPECT_EQ(scan.pairs, 256U * 256U);
    EXPECT_LE(scan.max_discrepancy, lam + 1e-9);
    EXPECT_NEAR(scan.max_discrepancy, mixing_discrepancy(h, scan.a, scan.b), 1e-12);
  }
}

TEST(Mixing, DirectFormula) {
  const auto h = perfect_matching(4);
  EXPECT_NEAR(mixing_discrepancy(h, {0, 1}, {0, 1}), 0.5 - 0.25, 1e-12);
  EXPECT_NEAR(mixing_discrepancy(complete_bipartite(4, 4), {0}, {1, 2}), 0.0, 1e-12);
  const auto sampled = scan_mixing(random_biregular(20, 20, 3, 1), 200, 5);
  EXPECT_FALSE(sampled.exhaustive);
  EXPECT_EQ(sampled.pairs, 200U);
}
