#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "fortify/game.hpp"
#include "fortify/graph.hpp"
#include "fortify/spectral.hpp"
#include "fortify/subsets.hpp"

namespace fortify {

enum class CertificateMode { kExhaustive, kSampled, kSpectral, kProduct };

/// (delta, eps1, eps2)-fortifier: every left set S with |S| >= delta |W|
/// induces pi on the right with |pi - u|_1 <= eps1 and |pi - u|^2 <= eps2/|X|.
struct FortifierCertificate {
  double delta = 1.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  CertificateMode mode = CertificateMode::kExhaustive;
  /// Sampled mode only refutes; a sampled "certificate" is the empirical worst.
  bool one_sided = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t subsets_checked = 0;
  std::optional<double> lambda;
  std::optional<double> extractor_eps;
  /// Worst observed values and the sets achieving them (scan modes only).
  double achieved_l1 = 0.0;
  double achieved_l2 = 0.0;
  std::optional<VertexSet> witness;
  bool worst_at_boundary = true;
};

struct ExtractorCertificate {
  double delta = 1.0;
  double eps = 0.0;
  CertificateMode mode = CertificateMode::kExhaustive;
  bool one_sided = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t subsets_checked = 0;
  double achieved_l1 = 0.0;
  std::optional<VertexSet> witness;
};

struct Counterexample {
  VertexSet subset;
  double l1 = 0.0;
  /// |X| * |pi - u|^2
  double l2_scaled = 0.0;
};

struct SubsetDeviation {
  double l1 = 0.0;
  double l2_scaled = 0.0;
};

/// Worst deviations over a family of large subsets.
struct DeviationScan {
  std::size_t k_min = 0;
  std::uint64_t subsets = 0;
  double worst_l1 = 0.0;
  VertexSet worst_l1_subset;
  double worst_l2 = 0.0;
  VertexSet worst_l2_subset;
  /// Per-size maxima, index k - k_min.
  std::vector<double> worst_l1_by_size;
  std::vector<double> worst_l2_by_size;
  bool l1_worst_at_boundary = true;
  bool l2_worst_at_boundary = true;
};

/// pi(x) = (1/|S|) sum_{w in S} mult(w, x) / deg(w).
Distribution induced_distribution(const BipartiteGraph& h, const VertexSet& s);

/// Distances of the induced distribution from uniform. Left-regular graphs
/// are handled with integer numerators, so equal deviations compare equal.
SubsetDeviation subset_deviation(const BipartiteGraph& h, const VertexSet& s);

DeviationScan scan_deviations(const BipartiteGraph& h, double delta, const SubsetMode& mode);

std::variant<FortifierCertificate, Counterexample> check_fortifier(const BipartiteGraph& h, double delta,
                                                                   double eps1, double eps2,
                                                                   const SubsetMode& mode);

std::variant<ExtractorCertificate, Counterexample> check_extractor(const BipartiteGraph& h, double delta,
                                                                   double eps, const SubsetMode& mode);

/// An expander with parameter lambda is a (delta, sqrt(lambda^2/delta), lambda^2/delta)-fortifier.
FortifierCertificate fortifier_from_expander(const ExpanderCertificate& cert, double delta);

/// Product graph H1 . H2: edge (v, x) with multiplicity sum_w mult1(v,w) mult2(w,x).
BipartiteGraph product_graph(const BipartiteGraph& h1, const BipartiteGraph& h2);

struct ProductFortifier {
  BipartiteGraph graph;
  FortifierCertificate certificate;
};

/// Bi-regular (delta, eps)-extractor times bi-regular lambda-expander is a
/// (delta, eps, lambda^2 eps / delta)-fortifier.
ProductFortifier product_fortifier(const BipartiteGraph& h1, const ExtractorCertificate& ext,
                                   const BipartiteGraph& h2, const ExpanderCertificate& exp);

/// Slack added to every bound comparison.
inline constexpr double kBoundSlack = 1e-9;

}  // namespace fortify
