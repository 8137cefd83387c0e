#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fortify {

using Vertex = std::uint32_t;

struct Edge {
  Vertex left = 0;
  Vertex right = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted list of vertex indices on one side of a bipartite graph.
using VertexSet = std::vector<Vertex>;

/// Bipartite multigraph ((left, right), edges). The edge multiset is kept
/// sorted by (left, right); a parallel edge appears once per copy.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(std::size_t n_left, std::size_t n_right, std::vector<Edge> edges);

  std::size_t n_left() const noexcept { return n_left_; }
  std::size_t n_right() const noexcept { return n_right_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  const std::vector<std::size_t>& left_degrees() const noexcept { return left_deg_; }
  const std::vector<std::size_t>& right_degrees() const noexcept { return right_deg_; }

  bool is_left_regular() const noexcept;
  bool is_right_regular() const noexcept;
  bool is_biregular() const noexcept { return is_left_regular() && is_right_regular(); }

  /// Common left degree; throws NotLeftRegular otherwise.
  std::size_t left_degree() const;
  /// Common right degree; throws NotBiregular when right degrees differ.
  std::size_t right_degree() const;

  /// Right endpoints of `w`, ascending, repeated by multiplicity.
  std::span<const Vertex> left_neighbors(Vertex w) const;
  /// Left endpoints of `x`, ascending, repeated by multiplicity.
  std::span<const Vertex> right_neighbors(Vertex x) const;

  std::size_t multiplicity(Vertex w, Vertex x) const;

  /// Same graph with left and right sides exchanged.
  BipartiteGraph transposed() const;

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.n_left_ == b.n_left_ && a.n_right_ == b.n_right_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_left_ = 0;
  std::size_t n_right_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> left_deg_;
  std::vector<std::size_t> right_deg_;
  // CSR adjacency in both directions.
  std::vector<std::size_t> left_offsets_;
  std::vector<Vertex> left_adj_;
  std::vector<std::size_t> right_offsets_;
  std::vector<Vertex> right_adj_;
};

BipartiteGraph complete_bipartite(std::size_t n_left, std::size_t n_right);
BipartiteGraph perfect_matching(std::size_t n);
/// Cycle of length 2n on n + n vertices: w_i ~ x_i and w_i ~ x_{i+1 mod n}.
BipartiteGraph bipartite_cycle(std::size_t n);

/// Validates and sorts a vertex list; throws InvalidArgument on out-of-range
/// or duplicate entries.
VertexSet normalize_set(VertexSet set, std::size_t ground_size);
VertexSet full_set(std::size_t ground_size);

}  // namespace fortify
