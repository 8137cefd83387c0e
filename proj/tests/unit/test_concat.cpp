#include <gtest/gtest.h>

#include <cmath>

#include "fortify/concat.hpp"
#include "fortify/error.hpp"
#include "fortify/spectral.hpp"
#include "oracles.hpp"

using namespace fortify;

namespace {

Game matching_equality_game(std::size_t n, std::size_t sigma) {
  std::vector<Label> id(sigma);
  for (Label a = 0; a < sigma; ++a) id[a] = a;
  const auto h = perfect_matching(n);
  std::vector<Relation> rel(n, Relation::from_function(sigma, id));
  return Game(n, n, sigma, sigma, {h.edges().begin(), h.edges().end()}, rel);
}

Game biregular_game(std::uint64_t seed, std::size_t n, std::size_t d) {
  return random_game(random_biregular(n, n, d, seed), 2, 2, 0.5, seed);
}

}  // namespace

TEST(Concatenate, ShapeAndValidation) {
  const Game g = biregular_game(1, 3, 2);
  const auto h1 = random_biregular(4, 3, 3, 2);
  const auto h2 = random_biregular(6, 3, 1, 3);
  const ConcatenatedGame cg = concatenate(h1, g, h2);
  EXPECT_EQ(cg.n_left(), 4U);
  EXPECT_EQ(cg.n_right(), 6U);
  EXPECT_EQ(cg.sigma_w(), 8U);
  EXPECT_EQ(cg.sigma_z(), 2U);
  std::uint64_t expected = 0;
  for (const Edge& e : g.graph().edges()) expected += h1.right_degrees()[e.left] * h2.right_degrees()[e.right];
  EXPECT_EQ(cg.num_derived_edges(), expected);
  EXPECT_EQ(cg.derived_edges().size(), expected);
  const Game d = cg.derived_game();
  EXPECT_EQ(d.graph().num_edges(), expected);
  EXPECT_EQ(d.sigma_x(), 8U);
  EXPECT_THROW(concatenate(random_biregular(4, 4, 2, 1), g, h2), Error);
  EXPECT_THROW(concatenate(BipartiteGraph(2, 3, {{0, 0}, {0, 1}, {1, 2}}), g, h2), Error);
}

TEST(Concatenate, DerivedRelationsDecodeCoordinates) {
  const Game g = biregular_game(4, 2, 1);
  const ConcatenatedGame cg = concatenate(complete_bipartite(1, 2), g, complete_bipartite(1, 2));
  std::vector<Relation> expected;
  for (const auto& de : cg.derived_edges()) {
    const Relation& base = g.relation(de.base_edge);
    Relation r(4, 4);
    for (Label a = 0; a < 4; ++a)
      for (Label b = 0; b < 4; ++b)
        if (base.accepts((a >> de.slot_w) & 1U, (b >> de.slot_z) & 1U)) r.allow(a, b);
    expected.push_back(r);
  }
  const Game d = cg.derived_game();
  std::vector<Relation> actual(d.relations().begin(), d.relations().end());
  std::sort(expected.begin(), expected.end());
  std::sort(actual.begin(), actual.end());
  EXPECT_EQ(actual, expected);
}

// Concatenation with bi-regular gadgets preserves the value.
TEST(Concatenate, ValuePreservedOnBiregularGadgets) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game g = biregular_game(seed, 3, 2);
    const auto h1 = random_biregular(3, 3, 1 + seed % 2, seed + 1);
    const auto h2 = random_biregular(6, 3, 1, seed + 2);
    const ConcatenatedGame cg = concatenate(h1, g, h2);
    const Ratio base = game_value(g).value;
    EXPECT_EQ(concatenated_value(cg, SubgameSolver::kBruteForce).result.value, base) << seed;
    EXPECT_EQ(concatenated_value(cg, SubgameSolver::kReduction).result.value, base) << seed;
  }
}

TEST(Concatenate, ReductionMatchesBruteForceOnRectangles) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Game g = oracle::random_tiny_game(seed, 2, 2, 2, 2, 2);
    const auto h1 = random_biregular(4, 2, 1, seed);
    const auto h2 = random_biregular(4, 2, 2, seed + 9);
    const ConcatenatedGame cg = concatenate(h1, g, h2);
    const Game d = cg.derived_game();
    Rng rng(seed);
    for (int trial = 0; trial < 5; ++trial) {
      const VertexSet s = rng.subset(4, 1 + static_cast<std::uint32_t>(rng.below(4)));
      const VertexSet t = rng.subset(4, 1 + static_cast<std::uint32_t>(rng.below(4)));
      const auto w = cg.rectangle_weights(s, t);
      std::int64_t total = 0;
      for (auto x : w) total += x;
      if (total == 0) {
        EXPECT_THROW(concatenated_subgame_value(cg, s, t, SubgameSolver::kReduction), Error);
        continue;
      }
      const Ratio expected = oracle::subgame_value(d, s, t);
      EXPECT_EQ(concatenated_subgame_value(cg, s, t, SubgameSolver::kReduction).result.value, expected);
      EXPECT_EQ(concatenated_subgame_value(cg, s, t, SubgameSolver::kBruteForce).result.value, expected);
    }
  }
}

TEST(Concatenate, RectangleWeightsAreDegreeProducts) {
  const Game g = biregular_game(3, 4, 2);
  const auto h1 = random_biregular(8, 4, 2, 1);
  const auto h2 = random_biregular(4, 4, 2, 2);
  const ConcatenatedGame cg = concatenate(h1, g, h2);
  const VertexSet s{0, 3, 5}, t{1, 2};
  const auto w = cg.rectangle_weights(s, t);
  for (std::size_t i = 0; i < g.graph().num_edges(); ++i) {
    const Edge e = g.graph().edges()[i];
    std::int64_t ds = 0, dt = 0;
    for (Vertex v : s) ds += static_cast<std::int64_t>(h1.multiplicity(v, e.left));
    for (Vertex v : t) dt += static_cast<std::int64_t>(h2.multiplicity(v, e.right));
    EXPECT_EQ(w[i], ds * dt);
  }
}

TEST(Audit, ExactAuditOnPlainExpandersIsRobust) {
  const Game g = matching_equality_game(2, 2);
  const ConcatenatedGame cg = concatenate(complete_bipartite(4, 2), g, complete_bipartite(4, 2));
  const auto r = audit_exact(cg, 0.5, 0.0, RectangleMode{});
  EXPECT_EQ(r.verdict, Verdict::kRobust);
  EXPECT_DOUBLE_EQ(r.base_value, 1.0);
  EXPECT_EQ(r.rectangles_checked, 11U * 11U);
  EXPECT_EQ(r.rectangles_empty, 0U);
}

TEST(Audit, DetectsSkewedRectangle) {
  // Left vertices 0, 1 only see x = 0, where the base constraint is trivially true.
  std::vector<Relation> rel{Relation::full(2, 2), Relation(2, 2)};
  const Game g(2, 2, 2, 2, {{0, 0}, {1, 1}}, rel);
  const BipartiteGraph h(4, 2, {{0, 0}, {1, 0}, {2, 1}, {3, 1}});
  const ConcatenatedGame cg = concatenate(h, g, h);
  RectangleMode mode;
  const auto exact = audit_exact(cg, 0.5, 0.1, mode);
  EXPECT_EQ(exact.verdict, Verdict::kViolated);
  ASSERT_TRUE(exact.worst_value.has_value());
  EXPECT_EQ(*exact.worst_value, Ratio(1, 1));
  EXPECT_GT(exact.rectangles_empty, 0U);
  const auto dist = audit_distance(cg, 0.5, 0.1, mode);
  EXPECT_EQ(dist.verdict, Verdict::kViolated);
  EXPECT_NEAR(dist.worst_statistic, 1.0, 1e-12);
  ASSERT_TRUE(dist.implied_value_bound.has_value());
  EXPECT_GE(*dist.implied_value_bound, exact.worst_statistic - 1e-12);
}

TEST(Audit, SampledAuditVisitsCandidatesFirst) {
  std::vector<Relation> rel{Relation::full(2, 2), Relation(2, 2)};
  const Game g(2, 2, 2, 2, {{0, 0}, {1, 1}}, rel);
  const BipartiteGraph h(4, 2, {{0, 0}, {1, 0}, {2, 1}, {3, 1}});
  const ConcatenatedGame cg = concatenate(h, g, h);
  RectangleMode mode;
  mode.kind = SubsetMode::Kind::kSampled;
  mode.trials = 1;
  mode.candidates.push_back({{0, 1}, {0, 1}});
  const auto r = audit_exact(cg, 0.5, 0.1, mode);
  EXPECT_EQ(r.verdict, Verdict::kViolated);
  EXPECT_EQ(r.worst_rectangle.left, (VertexSet{0, 1}));
}

TEST(Audit, DistanceImpliesValueBound) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Game g = biregular_game(seed, 3, 2);
    const auto h = random_biregular(6, 3, 2, seed);
    const ConcatenatedGame cg = concatenate(h, g, h);
    const auto exact = audit_exact(cg, 0.5, 1.0, RectangleMode{});
    const auto dist = audit_distance(cg, 0.5, 2.0, RectangleMode{});
    EXPECT_LE(exact.worst_statistic, *dist.implied_value_bound + 1e-9);
  }
}

TEST(Audit, GameAuditAndMeasuredRobustness) {
  const Game g = biregular_game(2, 3, 2);
  const double eps = measured_robustness(g, 0.5);
  EXPECT_GE(eps, 0.0);
  EXPECT_EQ(audit_game(g, 0.5, eps, RectangleMode{}).verdict, Verdict::kRobust);
  if (eps > 1e-6) EXPECT_EQ(audit_game(g, 0.5, eps - 1e-6, RectangleMode{}).verdict, Verdict::kViolated);
}

TEST(Audit, BudgetExceeded) {
  const Game g = matching_equality_game(2, 2);
  const ConcatenatedGame cg = concatenate(complete_bipartite(16, 2), g, complete_bipartite(16, 2));
  RectangleMode mode;
  mode.budget = 100;
  EXPECT_THROW(audit_distance(cg, 0.1, 0.1, mode), Error);
}

// The deviation decomposition obeys its bounds for arbitrary distributions.
TEST(DeviationBound, ClaimsHoldOnRandomDistributions) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 4 + seed % 5;
    const auto h = random_biregular(n, n, 2 + seed % 2, seed);
    const Game g = random_game(h, 2, 2, 0.5, seed);
    const double lam = oracle::lambda(h);
    Rng rng(seed * 7 + 1);
    auto draw = [&](GroundSet ground) {
      Distribution d{ground, std::vector<double>(n)};
      double sum = 0.0;
      for (auto& w : d.weights) sum += (w = 0.2 + rng.unit());
      for (auto& w : d.weights) w /= sum;
      return d;
    };
    const auto b = deviation_bound(g, draw(GroundSet::kLeftVertices), draw(GroundSet::kRightVertices), lam);
    EXPECT_LE(b.claim1, lam * b.eps2 + 1e-9);
    EXPECT_LE(b.claim2, 2 * b.eps1 + b.eps1 * b.eps1 + lam * b.eps2 + 1e-9);
    EXPECT_LE(b.total, b.claim1 + b.claim2 + 1e-9);
    EXPECT_LE(b.total, b.bound + 1e-9);
  }
}

TEST(DeviationBound, UniformInputsGiveZero) {
  const auto h = random_biregular(5, 5, 2, 1);
  const Game g = random_game(h, 2, 2, 0.5, 1);
  const auto b = deviation_bound(g, Distribution::uniform(GroundSet::kLeftVertices, 5),
                                 Distribution::uniform(GroundSet::kRightVertices, 5), 0.5);
  EXPECT_NEAR(b.total, 0.0, 1e-12);
  EXPECT_NEAR(b.bound, 0.0, 1e-12);
}
