#include "fortify/subsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fortify/error.hpp"
#include "fortify/parallel.hpp"
#include "fortify/rng.hpp"

namespace fortify {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(result);
}

std::size_t min_subset_size(double delta, std::size_t n) {
  require(delta > 0.0 && delta <= 1.0, ErrorKind::kInvalidArgument, "density must lie in (0, 1]");
  // Tolerance keeps delta = k/n from rounding up to k + 1.
  const auto k = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

std::uint64_t count_subsets_from(std::size_t n, std::size_t k_min) {
  std::uint64_t total = 0;
  for (std::size_t k = k_min; k <= n; ++k) {
    const std::uint64_t c = binomial(n, k);
    if (total > std::numeric_limits<std::uint64_t>::max() - c) return std::numeric_limits<std::uint64_t>::max();
    total += c;
  }
  return total;
}

VertexSet unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank) {
  require(rank < binomial(n, k), ErrorKind::kInvalidArgument, "combination rank out of range");
  VertexSet out;
  out.reserve(k);
  Vertex next = 0;
  for (std::size_t remaining = k; remaining > 0; --remaining) {
    // Skip candidates whose block of combinations lies entirely below rank.
    while (true) {
      const std::uint64_t block = binomial(n - next - 1, remaining - 1);
      if (rank < block) break;
      rank -= block;
      ++next;
    }
    out.push_back(next++);
  }
  return out;
}

bool next_combination(VertexSet& set, std::size_t n) {
  const std::size_t k = set.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (set[i] < n - k + i) {
      ++set[i];
      for (std::size_t j = i + 1; j < k; ++j) set[j] = set[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::uint64_t planned_subset_count(std::size_t n, std::size_t k_min, const SubsetMode& mode) {
  if (mode.kind == SubsetMode::Kind::kSampled) return mode.candidates.size() + mode.trials;
  return mode.candidates.size() + count_subsets_from(n, k_min);
}

VertexSet sampled_subset(std::size_t n, std::size_t k_min, std::uint64_t seed, std::uint64_t index) {
  const std::size_t sizes = n - k_min + 1;
  const std::size_t k = k_min + static_cast<std::size_t>(index % sizes);
  Rng rng(derive_seed(seed, "large-subset", index));
  return rng.subset(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k));
}

void for_each_large_subset(std::size_t n, std::size_t k_min, const SubsetMode& mode,
                           const std::function<void(const VertexSet&, std::uint64_t, unsigned)>& visit) {
  require(n > 0, ErrorKind::kEmptySet, "ground set is empty");
  require(k_min >= 1 && k_min <= n, ErrorKind::kInvalidArgument, "minimum subset size out of range");
  std::uint64_t index = 0;
  for (const VertexSet& c : mode.candidates) {
    const VertexSet normalized = normalize_set(c, n);
    require(normalized.size() >= k_min, ErrorKind::kInvalidArgument,
            "candidate subset is smaller than the density threshold");
    visit(normalized, index++, 0);
  }
  const std::uint64_t offset = index;

  if (mode.kind == SubsetMode::Kind::kSampled) {
    require(mode.trials >= 1, ErrorKind::kInvalidArgument, "sampled mode needs at least one trial");
    parallel_ranges(mode.trials, mode.jobs, [&](std::size_t begin, std::size_t end, unsigned worker) {
      for (std::size_t t = begin; t < end; ++t) visit(sampled_subset(n, k_min, mode.seed, t), offset + t, worker);
    });
    return;
  }

  const std::uint64_t total = count_subsets_from(n, k_min);
  require(total <= mode.budget, ErrorKind::kBudgetExceeded,
          "exhaustive enumeration needs " + std::to_string(total) + " subsets, budget is " +
              std::to_string(mode.budget));
  parallel_ranges(total, mode.jobs, [&](std::size_t begin, std::size_t end, unsigned worker) {
    if (begin >= end) return;
    // Locate the size block holding `begin`.
    std::size_t k = k_min;
    std::uint64_t rank = begin;
    while (rank >= binomial(n, k)) {
      rank -= binomial(n, k);
      ++k;
    }
    VertexSet set = unrank_combination(n, k, rank);
    for (std::size_t i = begin; i < end; ++i) {
      visit(set, offset + i, worker);
      if (!next_combination(set, n)) {
        ++k;
        if (k > n) break;
        set = full_set(k);
      }
    }
  });
}

}  // namespace fortify
