#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fortify/adversarial.hpp"
#include "fortify/error.hpp"
#include "fortify/spectral.hpp"
#include "fortify/subsets.hpp"
#include "oracles.hpp"

using namespace fortify;

namespace {

std::vector<VertexSet> s_neighborhoods(const BipartiteGraph& h, const VertexSet& s) {
  std::vector<VertexSet> out(h.n_right());
  for (const Edge& e : h.edges())
    if (std::binary_search(s.begin(), s.end(), e.left)) out[e.right].push_back(e.left);
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

bool nested(const VertexSet& a, const VertexSet& b) {
  return std::includes(a.begin(), a.end(), b.begin(), b.end()) ||
         std::includes(b.begin(), b.end(), a.begin(), a.end());
}

VertexSet prefix(std::size_t k) {
  VertexSet s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = static_cast<Vertex>(i);
  return s;
}

}  // namespace

TEST(Skew, InvariantsOnRandomExtractors) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto h = random_biregular(60, 20, 4, seed);
    const VertexSet s = prefix(30);
    const auto r = skew_extractor(h, s, 0.3, {static_cast<Vertex>(seed % 20), std::nullopt});
    ASSERT_TRUE(r.graph.is_left_regular());
    EXPECT_EQ(r.graph.left_degree(), 4U);
    EXPECT_EQ(r.graph.n_right(), 20U);
    for (Vertex w = 30; w < 60; ++w) {
      const auto a = h.left_neighbors(w);
      const auto b = r.graph.left_neighbors(w);
      EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
    const auto before = s_neighborhoods(h, s);
    const auto mid = s_neighborhoods(r.uniform_stage, s);
    const auto after = s_neighborhoods(r.graph, s);
    const std::size_t t = 30 * 4 / 20;
    EXPECT_EQ(r.report.uniform_degree, t);
    for (std::size_t x = 0; x < 20; ++x) {
      EXPECT_EQ(mid[x].size(), t);
      EXPECT_TRUE(nested(before[x], mid[x]));
      EXPECT_TRUE(nested(mid[x], after[x]));
    }
    const std::size_t k = static_cast<std::size_t>(std::floor(0.3 * t));
    EXPECT_EQ(r.report.per_vertex_moves, k);
    EXPECT_EQ(after[seed % 20].size(), t + 19 * k);
    const auto pi = oracle::induced(r.graph, s);
    EXPECT_NEAR(pi[seed % 20], r.report.achieved_mass, 1e-12);
    EXPECT_NEAR(r.report.achieved_mass + r.report.rounding_slack / (30.0 * 4.0), 1.0 / 20 + 0.3 * 19.0 / 20, 1e-9);
    EXPECT_EQ(r.report.step2_relocated, 19 * k);
    EXPECT_EQ(r.report.edges_relocated, r.report.step1_relocated + r.report.step2_relocated);
    EXPECT_EQ(r.report.step1_relocated * 2, r.report.step1_imbalance);
  }
}

TEST(Skew, Deterministic) {
  const auto h = random_biregular(40, 10, 5, 3);
  const auto a = skew_extractor(h, prefix(20), 0.2);
  const auto b = skew_extractor(h, prefix(20), 0.2);
  EXPECT_EQ(a.graph, b.graph);
}

TEST(Skew, MeasuresExtractorParameters) {
  const auto h = random_biregular(40, 10, 5, 3);
  SkewOptions opts;
  opts.check = SubsetMode::sampled(50, 1);
  const auto r = skew_extractor(h, prefix(20), 0.4, opts);
  ASSERT_TRUE(r.report.final_eps.has_value());
  EXPECT_GE(*r.report.final_eps, oracle::l1(oracle::induced(r.graph, prefix(20))) - 1e-12);
}

TEST(Skew, Preconditions) {
  const auto h = random_biregular(40, 10, 5, 3);
  EXPECT_THROW(skew_extractor(h, prefix(3), 0.3), Error);
  EXPECT_THROW(skew_extractor(h, prefix(2), 0.3), Error);
  EXPECT_THROW(skew_extractor(h, prefix(20), 1.5), Error);
  EXPECT_THROW(skew_extractor(BipartiteGraph(2, 2, {{0, 0}, {0, 1}, {1, 0}}), {0}, 0.3), Error);
}

TEST(BadSubset, CompleteGraphHasNoSkew) {
  const auto r = find_bad_subset(complete_bipartite(40, 10), 0.1, 0.1, 1.0);
  EXPECT_NEAR(r.achieved, 0.0, 1e-12);
  EXPECT_FALSE(r.s1_disjoint);
  EXPECT_GE(r.subset.size(), min_subset_size(0.1, 40));
}

TEST(BadSubset, LowDegreeCaseReturnsEverything) {
  // A quarter of the right side is isolated.
  const auto base = random_biregular(12, 6, 2, 1);
  const BipartiteGraph h(12, 8, {base.edges().begin(), base.edges().end()});
  const auto r = find_bad_subset(h, 0.2, 0.1, 1.0);
  EXPECT_EQ(r.which, BadSubsetCase::kLowDegree);
  EXPECT_EQ(r.subset.size(), 12U);
  EXPECT_NEAR(r.achieved, oracle::l2_scaled(oracle::induced(h, r.subset)), 1e-12);
}

TEST(BadSubset, ReturnedSetIsLargeAndMeasuredCorrectly) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const double delta = 0.1, eps = 0.05;
    const auto d = static_cast<std::size_t>(0.2 / (eps * delta));
    const auto h = random_biregular(200, 100, d / 2, seed);
    const auto r = find_bad_subset(h, delta, eps, 5.0);
    EXPECT_GE(r.subset.size(), min_subset_size(delta, 200));
    const auto pi = oracle::induced(h, r.subset);
    EXPECT_NEAR(r.achieved, oracle::l2_scaled(pi), 1e-12);
    EXPECT_NEAR(r.l1, oracle::l1(pi), 1e-12);
    EXPECT_GE(r.achieved, std::max(r.s1_achieved, r.s2_achieved) - 1e-15);
    // Cauchy-Schwarz: |X| |pi - u|^2 >= |pi - u|_1^2.
    EXPECT_GE(r.achieved + 1e-12, r.l1 * r.l1);
    EXPECT_EQ(r.subset, find_bad_subset(h, delta, eps, 5.0).subset);
  }
}
