#include <gtest/gtest.h>

#include <cmath>

#include "fortify/error.hpp"
#include "fortify/repetition.hpp"
#include "fortify/spectral.hpp"
#include "oracles.hpp"

using namespace fortify;

namespace {

Game contradiction_game() {
  const std::pair<Label, Label> eq[] = {{0, 0}, {1, 1}};
  const std::pair<Label, Label> ne[] = {{0, 1}, {1, 0}};
  return Game(1, 1, 2, 2, {{0, 0}, {0, 0}}, {Relation::from_pairs(2, 2, eq), Relation::from_pairs(2, 2, ne)});
}

}  // namespace

TEST(TupleCoordinate, LittleEndian) {
  EXPECT_EQ(tuple_coordinate(5, 0, 2), 1U);
  EXPECT_EQ(tuple_coordinate(5, 1, 2), 0U);
  EXPECT_EQ(tuple_coordinate(5, 2, 2), 1U);
  EXPECT_EQ(tuple_coordinate(7, 1, 3), 2U);
}

TEST(Repeat, SingleRoundIsIdentity) {
  const Game g = oracle::random_tiny_game(3, 3, 2, 2, 3, 2);
  EXPECT_EQ(repeat_game(g, 1), g);
}

TEST(Repeat, StructureAndRelations) {
  const Game g = oracle::random_tiny_game(8, 2, 2, 2, 2, 1);
  const Game g2 = repeat_game(g, 2);
  const std::size_t m = g.graph().num_edges();
  EXPECT_EQ(g2.graph().num_edges(), m * m);
  EXPECT_EQ(g2.graph().n_left(), 4U);
  EXPECT_EQ(g2.sigma_x(), 4U);
  // Every pair of base edges appears once with the conjunction of its relations.
  std::size_t checked = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Edge a = g.graph().edges()[i], b = g.graph().edges()[j];
      const Edge want{static_cast<Vertex>(a.left * 2 + b.left), static_cast<Vertex>(a.right * 2 + b.right)};
      bool found = false;
      for (std::size_t e = 0; e < g2.graph().num_edges() && !found; ++e) {
        if (g2.graph().edges()[e] != want) continue;
        bool match = true;
        for (Label x = 0; x < 4; ++x)
          for (Label y = 0; y < 4; ++y)
            match &= g2.relation(e).accepts(x, y) ==
                     (g.relation(i).accepts(x % 2, y % 2) && g.relation(j).accepts(x / 2, y / 2));
        found = match;
      }
      EXPECT_TRUE(found);
      ++checked;
    }
  EXPECT_EQ(checked, m * m);
}

TEST(Repeat, SatisfiableStaysSatisfiable) {
  const Game g(2, 2, 2, 2, {{0, 0}, {1, 1}, {0, 1}}, {Relation::full(2, 2), Relation::full(2, 2), Relation::full(2, 2)});
  EXPECT_EQ(game_value(repeat_game(g, 3)).value, Ratio(1, 1));
}

TEST(Repeat, ContradictionGameSandwich) {
  const Game g = contradiction_game();
  const Ratio v2 = game_value(repeat_game(g, 2)).value;
  EXPECT_EQ(v2, oracle::value(repeat_game(g, 2)));
  EXPECT_GE(v2, Ratio(1, 4));
  EXPECT_LE(v2, Ratio(1, 2));
}

TEST(Repeat, BudgetExceeded) {
  const Game g = oracle::random_tiny_game(1, 4, 4, 3, 3, 8);
  RepeatOptions tight;
  tight.max_edges = 100;
  EXPECT_THROW(repeat_game(g, 3, tight), Error);
}

TEST(Recursion, SandwichAndOracleOnTinyGames) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Game g = oracle::random_tiny_game(seed, 2, 2, 2, 2, seed % 2);
    RecursionOptions opts;
    opts.check_projection = false;
    const auto r = verify_recursion(g, 2, 0.5, 0.1, opts);
    EXPECT_TRUE(r.sandwich_ok);
    ASSERT_EQ(r.values.size(), 2U);
    EXPECT_EQ(r.values[1], oracle::value(repeat_game(g, 2)));
    EXPECT_GE(r.values[1].to_double() + 1e-12, std::pow(r.values[0].to_double(), 2));
    ASSERT_TRUE(r.partition.has_value());
    const auto& p = *r.partition;
    EXPECT_EQ(p.a0 + p.a1 + p.a2, p.total);
    EXPECT_EQ(p.wins_in_a1 + p.wins_in_a2, p.wins);
    EXPECT_EQ(Ratio(static_cast<std::int64_t>(p.wins), static_cast<std::int64_t>(p.total)), r.values[1]);
    EXPECT_TRUE(p.first_rounds_ok);
    EXPECT_TRUE(p.rectangles_ok);
  }
}

TEST(Recursion, BoundAssertedOnlyWhenPreconditionsHold) {
  const Game g = random_game(complete_bipartite(2, 2), 2, 2, 0.6, 5);
  const auto loose = verify_recursion(g, 2, 0.01, 1.0);
  EXPECT_TRUE(loose.precondition_ok);
  EXPECT_TRUE(loose.robust);
  ASSERT_TRUE(loose.bound_holds.has_value());
  EXPECT_TRUE(*loose.bound_holds);
  const auto strict = verify_recursion(g, 2, 0.5, 0.1);
  EXPECT_FALSE(strict.precondition_ok);
  EXPECT_FALSE(strict.bound_holds.has_value());
}

TEST(Recursion, ProjectionGamesGetSymmetrizedCheck) {
  const Game g = random_projection_game(complete_bipartite(2, 1), 2, 2, 3);
  const auto r = verify_recursion(g, 2, 0.1, 0.5);
  ASSERT_TRUE(r.projection.has_value());
  EXPECT_TRUE(r.projection->symmetrized_biregular);
  EXPECT_TRUE(r.projection->precondition_ok);
  if (r.projection->holds) EXPECT_TRUE(*r.projection->holds);
}
