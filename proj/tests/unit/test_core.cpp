#include <gtest/gtest.h>

#include <set>

#include "fortify/error.hpp"
#include "fortify/graph.hpp"
#include "fortify/parallel.hpp"
#include "fortify/ratio.hpp"
#include "fortify/rng.hpp"
#include "fortify/subsets.hpp"

using namespace fortify;

TEST(Ratio, ReducesAndCompares) {
  EXPECT_EQ(Ratio(2, 4), Ratio(1, 2));
  EXPECT_EQ(Ratio(3, 3).to_string(), "1");
  EXPECT_EQ(Ratio(2, 6).to_string(), "1/3");
  EXPECT_LT(Ratio(1, 3), Ratio(1, 2));
  EXPECT_THROW(Ratio(1, 0), Error);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(derive_seed(1, "x"), derive_seed(1, "y"));
  EXPECT_NE(derive_seed(1, "x", 0), derive_seed(1, "x", 1));
  EXPECT_EQ(derive_seed(9, "purpose", 3), derive_seed(9, "purpose", 3));
}

TEST(Rng, BelowAndSubsetStayInRange) {
  Rng r(7);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(r.below(13), 13U);
  for (std::uint32_t k = 0; k <= 10; ++k) {
    const auto s = r.subset(10, k);
    ASSERT_EQ(s.size(), k);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::set<std::uint32_t>(s.begin(), s.end()).size(), k);
  }
}

TEST(Subsets, BinomialAndSizes) {
  EXPECT_EQ(binomial(10, 3), 120U);
  EXPECT_EQ(binomial(5, 0), 1U);
  EXPECT_EQ(binomial(3, 5), 0U);
  EXPECT_EQ(binomial(200, 100), UINT64_MAX);
  EXPECT_EQ(min_subset_size(0.5, 10), 5U);
  EXPECT_EQ(min_subset_size(0.25, 10), 3U);
  EXPECT_EQ(min_subset_size(0.01, 10), 1U);
  EXPECT_THROW(min_subset_size(0.0, 10), Error);
  EXPECT_EQ(count_subsets_from(4, 2), 6U + 4U + 1U);
}

TEST(Subsets, UnrankMatchesSuccessor) {
  const std::size_t n = 7, k = 3;
  VertexSet s{0, 1, 2};
  std::uint64_t rank = 0;
  do {
    EXPECT_EQ(unrank_combination(n, k, rank), s);
    ++rank;
  } while (next_combination(s, n));
  EXPECT_EQ(rank, binomial(n, k));
}

TEST(Subsets, ExhaustiveStreamVisitsEachLargeSubsetOnce) {
  std::set<VertexSet> seen;
  for_each_large_subset(6, 4, SubsetMode::exhaustive(), [&](const VertexSet& s, std::uint64_t, unsigned) {
    EXPECT_GE(s.size(), 4U);
    EXPECT_TRUE(seen.insert(s).second);
  });
  EXPECT_EQ(seen.size(), count_subsets_from(6, 4));
  EXPECT_EQ(planned_subset_count(6, 4, SubsetMode::exhaustive()), seen.size());
}

TEST(Subsets, BudgetIsEnforced) {
  EXPECT_THROW(for_each_large_subset(30, 1, SubsetMode::exhaustive(1000), [](const VertexSet&, std::uint64_t,
                                                                             unsigned) {}),
               Error);
}

TEST(Subsets, SampledStreamIsDeterministicAndIndependentOfJobs) {
  auto collect = [](unsigned jobs) {
    std::vector<VertexSet> out(50);
    SubsetMode m = SubsetMode::sampled(50, 11);
    m.jobs = jobs;
    for_each_large_subset(20, 5, m, [&](const VertexSet& s, std::uint64_t i, unsigned) { out[i] = s; });
    return out;
  };
  const auto a = collect(1);
  EXPECT_EQ(a, collect(3));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GE(a[i].size(), 5U);
    EXPECT_EQ(a[i], sampled_subset(20, 5, 11, i));
  }
}

TEST(Parallel, RangesCoverEverything) {
  for (unsigned jobs : {1U, 2U, 5U}) {
    std::vector<int> hits(37, 0);
    parallel_ranges(hits.size(), jobs, [&](std::size_t b, std::size_t e, unsigned) {
      for (auto i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Graph, DegreesAndNeighbors) {
  BipartiteGraph h(3, 2, {{2, 1}, {0, 0}, {0, 0}, {1, 1}});
  EXPECT_EQ(h.num_edges(), 4U);
  EXPECT_EQ(h.multiplicity(0, 0), 2U);
  EXPECT_FALSE(h.is_left_regular());
  EXPECT_EQ(h.right_neighbors(1).size(), 2U);
  EXPECT_THROW(h.left_degree(), Error);
  EXPECT_EQ(h.transposed().transposed(), h);
  EXPECT_THROW(BipartiteGraph(2, 2, {{0, 5}}), Error);
}

TEST(Graph, Families) {
  const auto k = complete_bipartite(3, 4);
  EXPECT_TRUE(k.is_biregular());
  EXPECT_EQ(k.left_degree(), 4U);
  EXPECT_EQ(k.right_degree(), 3U);
  EXPECT_EQ(perfect_matching(5).num_edges(), 5U);
  const auto c = bipartite_cycle(4);
  EXPECT_TRUE(c.is_biregular());
  EXPECT_EQ(c.left_degree(), 2U);
}

TEST(Graph, NormalizeSet) {
  EXPECT_EQ(normalize_set({3, 1, 2}, 4), (VertexSet{1, 2, 3}));
  EXPECT_THROW(normalize_set({1, 1}, 4), Error);
  EXPECT_THROW(normalize_set({4}, 4), Error);
  EXPECT_EQ(full_set(3), (VertexSet{0, 1, 2}));
}
