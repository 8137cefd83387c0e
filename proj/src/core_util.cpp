#include "fortify/error.hpp"
#include "fortify/ratio.hpp"
#include "fortify/rng.hpp"

#include <algorithm>
#include <limits>

namespace fortify {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kBudgetExceeded: return "BudgetExceeded";
    case ErrorKind::kEmptySubgame: return "EmptySubgame";
    case ErrorKind::kNotProjection: return "NotProjection";
    case ErrorKind::kZeroDenominator: return "ZeroDenominator";
    case ErrorKind::kNotLeftRegular: return "NotLeftRegular";
    case ErrorKind::kNotBiregular: return "NotBiregular";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kDivisibilityError: return "DivisibilityError";
    case ErrorKind::kSizeMismatch: return "SizeMismatch";
    case ErrorKind::kEmptySet: return "EmptySet";
    case ErrorKind::kIsolatedVertex: return "IsolatedVertex";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kParameterInfeasible: return "ParameterInfeasible";
    case ErrorKind::kGadgetUnavailable: return "GadgetUnavailable";
    case ErrorKind::kParseError: return "ParseError";
  }
  return "Unknown";
}

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  require(den > 0, ErrorKind::kInvalidArgument, "ratio denominator must be positive");
  require(num >= 0, ErrorKind::kInvalidArgument, "ratio numerator must be non-negative");
  const std::int64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

std::string Ratio::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  require(bound > 0, ErrorKind::kInvalidArgument, "Rng::below needs a positive bound");
  // Reject the tail of the 64-bit range that would bias the modulus.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % bound;
}

double Rng::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<std::uint32_t> Rng::subset(std::uint32_t n, std::uint32_t k) {
  require(k <= n, ErrorKind::kInvalidArgument, "subset size exceeds ground set");
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (std::uint32_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::uint32_t>(below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose, std::uint64_t index) {
  std::uint64_t h = splitmix64(root);
  for (const char c : purpose) h = splitmix64(h ^ static_cast<unsigned char>(c));
  return splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace fortify
