#include "fortify/graph.hpp"

#include <algorithm>
#include <string>

#include "fortify/error.hpp"

namespace fortify {

namespace {

void build_csr(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& pairs,
               std::vector<std::size_t>& offsets, std::vector<Vertex>& adj) {
  offsets.assign(n + 1, 0);
  for (const auto& [from, to] : pairs) ++offsets[from + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  adj.resize(pairs.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [from, to] : pairs) adj[cursor[from]++] = to;
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              adj.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
  }
}

template <class Container>
bool all_equal(const Container& c) {
  return std::adjacent_find(c.begin(), c.end(), std::not_equal_to<>()) == c.end();
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::size_t n_left, std::size_t n_right, std::vector<Edge> edges)
    : n_left_(n_left), n_right_(n_right), edges_(std::move(edges)) {
  for (const Edge& e : edges_) {
    require(e.left < n_left_ && e.right < n_right_, ErrorKind::kInvalidArgument,
            "edge (" + std::to_string(e.left) + ", " + std::to_string(e.right) + ") out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  left_deg_.assign(n_left_, 0);
  right_deg_.assign(n_right_, 0);
  std::vector<std::pair<Vertex, Vertex>> forward;
  std::vector<std::pair<Vertex, Vertex>> backward;
  forward.reserve(edges_.size());
  backward.reserve(edges_.size());
  for (const Edge& e : edges_) {
    ++left_deg_[e.left];
    ++right_deg_[e.right];
    forward.emplace_back(e.left, e.right);
    backward.emplace_back(e.right, e.left);
  }
  build_csr(n_left_, forward, left_offsets_, left_adj_);
  build_csr(n_right_, backward, right_offsets_, right_adj_);
}

bool BipartiteGraph::is_left_regular() const noexcept { return all_equal(left_deg_); }
bool BipartiteGraph::is_right_regular() const noexcept { return all_equal(right_deg_); }

std::size_t BipartiteGraph::left_degree() const {
  require(n_left_ > 0 && is_left_regular(), ErrorKind::kNotLeftRegular,
          "graph is not left-regular");
  return left_deg_.front();
}

std::size_t BipartiteGraph::right_degree() const {
  require(n_right_ > 0 && is_right_regular(), ErrorKind::kNotBiregular,
          "graph is not right-regular");
  return right_deg_.front();
}

std::span<const Vertex> BipartiteGraph::left_neighbors(Vertex w) const {
  require(w < n_left_, ErrorKind::kInvalidArgument, "left vertex out of range");
  return {left_adj_.data() + left_offsets_[w], left_offsets_[w + 1] - left_offsets_[w]};
}

std::span<const Vertex> BipartiteGraph::right_neighbors(Vertex x) const {
  require(x < n_right_, ErrorKind::kInvalidArgument, "right vertex out of range");
  return {right_adj_.data() + right_offsets_[x], right_offsets_[x + 1] - right_offsets_[x]};
}

std::size_t BipartiteGraph::multiplicity(Vertex w, Vertex x) const {
  const auto nbrs = left_neighbors(w);
  const auto [lo, hi] = std::equal_range(nbrs.begin(), nbrs.end(), x);
  return static_cast<std::size_t>(hi - lo);
}

BipartiteGraph BipartiteGraph::transposed() const {
  std::vector<Edge> flipped;
  flipped.reserve(edges_.size());
  for (const Edge& e : edges_) flipped.push_back({e.right, e.left});
  return {n_right_, n_left_, std::move(flipped)};
}

BipartiteGraph complete_bipartite(std::size_t n_left, std::size_t n_right) {
  std::vector<Edge> edges;
  edges.reserve(n_left * n_right);
  for (Vertex w = 0; w < n_left; ++w) {
    for (Vertex x = 0; x < n_right; ++x) edges.push_back({w, x});
  }
  return {n_left, n_right, std::move(edges)};
}

BipartiteGraph perfect_matching(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) edges.push_back({i, i});
  return {n, n, std::move(edges)};
}

BipartiteGraph bipartite_cycle(std::size_t n) {
  require(n >= 2, ErrorKind::kInvalidArgument, "bipartite cycle needs n >= 2");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) {
    edges.push_back({i, i});
    edges.push_back({i, static_cast<Vertex>((i + 1) % n)});
  }
  return {n, n, std::move(edges)};
}

VertexSet normalize_set(VertexSet set, std::size_t ground_size) {
  std::sort(set.begin(), set.end());
  require(std::adjacent_find(set.begin(), set.end()) == set.end(), ErrorKind::kInvalidArgument,
          "vertex set has duplicates");
  require(set.empty() || set.back() < ground_size, ErrorKind::kInvalidArgument,
          "vertex set index out of range");
  return set;
}

VertexSet full_set(std::size_t ground_size) {
  VertexSet set(ground_size);
  for (std::size_t i = 0; i < ground_size; ++i) set[i] = static_cast<Vertex>(i);
  return set;
}

}  // namespace fortify
