#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "fortify/graph.hpp"

namespace fortify {

enum class LambdaMethod { kExactSvd, kPowerIteration };

struct ExpanderCertificate {
  double lambda = 1.0;
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  std::size_t left_degree = 0;
  LambdaMethod method = LambdaMethod::kExactSvd;
  double tolerance = 1e-9;
  std::optional<std::uint64_t> seed;
  std::size_t iterations = 0;
};

struct PowerIterationOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 1'000'000;
};

/// H(y, x) = mult(x, y) / D for a left-regular graph of left degree D; shape
/// n_right x n_left, every column sums to 1.
Eigen::MatrixXd normalized_adjacency(const BipartiteGraph& h);

/// lambda(H) = max over v orthogonal to uniform of |Hv| / |v|, divided by
/// |H u| / |u|. For a bi-regular graph the denominator is the top singular
/// value sqrt(n_left / n_right), so lambda = sigma_2 * sqrt(n_right / n_left);
/// for square graphs this is the usual second singular value. Multi-edges
/// are allowed.
ExpanderCertificate spectral_lambda(const BipartiteGraph& h,
                                    LambdaMethod method = LambdaMethod::kExactSvd,
                                    const PowerIterationOptions& options = {});

/// Configuration model: left half-edges in order are paired with a seeded
/// shuffle of the right half-edges. The result is bi-regular and may contain
/// parallel edges.
BipartiteGraph random_biregular(std::size_t n_left, std::size_t n_right, std::size_t left_degree,
                                std::uint64_t seed);

struct CertifiedExpander {
  BipartiteGraph graph;
  ExpanderCertificate certificate;
  std::size_t attempts = 0;
};

/// Draws random_biregular graphs with seeds derived from `seed` until the
/// exact lambda is at most `target_lambda`; GadgetUnavailable after
/// `max_attempts` failures.
CertifiedExpander random_expander(std::size_t n_left, std::size_t n_right, std::size_t left_degree,
                                  std::uint64_t seed, double target_lambda,
                                  std::size_t max_attempts = 100);

/// | |E(A,B)| / |E| - |A|/|P| * |B|/|Q| | for a bi-regular graph with |P| = |Q|.
double mixing_discrepancy(const BipartiteGraph& h, const VertexSet& a, const VertexSet& b);

struct MixingScan {
  double max_discrepancy = 0.0;
  VertexSet a;
  VertexSet b;
  std::uint64_t pairs = 0;
  bool exhaustive = true;
};

/// Largest mixing discrepancy over all pairs of vertex sets (trials == 0,
/// at most 12 vertices per side) or over `trials` seeded random pairs.
MixingScan scan_mixing(const BipartiteGraph& h, std::uint64_t trials = 0, std::uint64_t seed = 0);

}  // namespace fortify
