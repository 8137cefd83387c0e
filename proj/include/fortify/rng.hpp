#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fortify {

/// Seeded generator with a fully specified output stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions and std::shuffle are not, so bounded
/// integers use rejection sampling on the raw 64-bit output and shuffles are a
/// plain Fisher-Yates pass from the back. Graphs generated from the same seed
/// are therefore identical on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) built from the top 53 bits.
  double unit();

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Sorted uniform k-subset of {0, ..., n-1}.
  std::vector<std::uint32_t> subset(std::uint32_t n, std::uint32_t k);

 private:
  std::mt19937_64 engine_;
};

/// Per-purpose seed derivation: splitmix64 over the root seed, a purpose tag
/// and an index. Every random consumer derives its own stream this way so that
/// adding a consumer never shifts another one's draws.
std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose, std::uint64_t index = 0);

}  // namespace fortify
