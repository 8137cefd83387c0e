#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "fortify/graph.hpp"
#include "fortify/subsets.hpp"

namespace fortify {

struct SkewOptions {
  /// Vertex of X that receives the relocated mass.
  Vertex x1 = 0;
  /// When set, the extractor parameter of the input and the output is
  /// measured with this subset stream (S itself is always examined).
  std::optional<SubsetMode> check;
};

struct SkewReport {
  Vertex x1 = 0;
  double delta = 0.0;
  double eps = 0.0;
  /// Common S-degree after step 1, |S| D / |X|.
  std::size_t uniform_degree = 0;
  /// Edges taken from each x != x1 in step 2, floor(eps * uniform_degree).
  std::size_t per_vertex_moves = 0;
  std::size_t step1_relocated = 0;
  std::size_t step2_relocated = 0;
  std::size_t edges_relocated = 0;
  /// eps * delta * |W| * D, the reference budget for relocations.
  double relocation_budget = 0.0;
  /// Sum over x of |d_S(x) - uniform_degree| before step 1.
  std::size_t step1_imbalance = 0;
  /// (eps * uniform_degree - per_vertex_moves) * (|X| - 1).
  double rounding_slack = 0.0;
  double target_mass = 0.0;
  double achieved_mass = 0.0;
  std::optional<double> original_eps;
  std::optional<double> final_eps;
};

struct SkewResult {
  BipartiteGraph graph;
  /// Graph after step 1 only (S-degrees exactly uniform).
  BipartiteGraph uniform_stage;
  SkewReport report;
};

/// Rewires the S x X edges of a left-regular graph: step 1 makes every
/// S-degree equal to |S| D / |X| by moving edges from over-full to
/// under-full vertices, step 2 moves floor(eps * |S| D / |X|) edges from every
/// x != x1 onto x1. Donor edges are those with the lowest left endpoint and
/// recipients are visited in increasing order, so every S-neighborhood only
/// shrinks or only grows within each step.
SkewResult skew_extractor(const BipartiteGraph& h, const VertexSet& s, double eps, const SkewOptions& options = {});

enum class BadSubsetCase { kLowDegree, kSplit };

struct BadSubset {
  VertexSet subset;
  /// |X| * |pi - u|^2 for the returned subset.
  double achieved = 0.0;
  double l1 = 0.0;
  BadSubsetCase which = BadSubsetCase::kSplit;
  /// Split case: the chosen X', and the scaled deviations of S1 and S2.
  VertexSet x_prime;
  double s1_achieved = 0.0;
  double s2_achieved = 0.0;
  bool chose_s2 = false;
  /// False when N(X') leaves fewer than ceil(delta |W|) vertices outside it
  /// (dense graphs); S1 is then topped up with the lowest vertices of N(X').
  bool s1_disjoint = true;
};

/// Constructive search for a large subset with a skewed induced distribution
/// in a left-regular graph of left degree about 1/(c eps delta). If at least
/// |X|/4 right vertices have degree below half the average, W itself is
/// returned. Otherwise X' is the ceil(c eps delta^2 |X|) lowest mid-degree
/// vertices, S0 = N(X'), S1 the ceil(delta |W|) lowest vertices outside S0,
/// S2 = S0 u S1, and the one of S1, S2 with the larger l2 deviation is
/// returned (S1 on ties).
BadSubset find_bad_subset(const BipartiteGraph& h, double delta, double eps, double c);

std::string to_string(BadSubsetCase c);

}  // namespace fortify
