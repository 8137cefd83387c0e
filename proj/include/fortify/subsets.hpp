#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fortify/graph.hpp"

namespace fortify {

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Smallest size k with k >= delta * n (and k >= 1).
std::size_t min_subset_size(double delta, std::size_t n);

/// Number of subsets of {0..n-1} with size in [k_min, n], saturating.
std::uint64_t count_subsets_from(std::size_t n, std::size_t k_min);

/// The rank-th k-subset of {0..n-1} in lexicographic order.
VertexSet unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank);

/// Advances `set` to the next k-subset in lexicographic order; false at the end.
bool next_combination(VertexSet& set, std::size_t n);

/// How a family of "large" subsets is traversed.
struct SubsetMode {
  enum class Kind { kExhaustive, kSampled };
  Kind kind = Kind::kExhaustive;
  /// Sampled mode: number of random subsets drawn; sizes cycle through
  /// k_min..n so every admissible size is visited.
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// Exhaustive mode: refuse to enumerate more than this many subsets.
  std::uint64_t budget = 20'000'000;
  /// Extra subsets always examined first (for example a known adversarial set).
  std::vector<VertexSet> candidates;
  unsigned jobs = 1;

  static SubsetMode exhaustive(std::uint64_t budget = 20'000'000) {
    SubsetMode m;
    m.budget = budget;
    return m;
  }
  static SubsetMode sampled(std::uint64_t trials, std::uint64_t seed) {
    SubsetMode m;
    m.kind = Kind::kSampled;
    m.trials = trials;
    m.seed = seed;
    return m;
  }
};

/// Visits every subset of {0..n-1} with size >= k_min that `mode` selects.
/// The visitor receives the subset, its global index in the stream and the
/// worker id. Exhaustive streams are ordered by size, then lexicographically;
/// sampled streams use seeds derived from mode.seed so that every module
/// drawing "large" subsets sees the same sequence.
void for_each_large_subset(std::size_t n, std::size_t k_min, const SubsetMode& mode,
                           const std::function<void(const VertexSet&, std::uint64_t, unsigned)>& visit);

/// Number of subsets for_each_large_subset will visit.
std::uint64_t planned_subset_count(std::size_t n, std::size_t k_min, const SubsetMode& mode);

/// The index-th sampled subset; shared by every sampled stream.
VertexSet sampled_subset(std::size_t n, std::size_t k_min, std::uint64_t seed, std::uint64_t index);

}  // namespace fortify
