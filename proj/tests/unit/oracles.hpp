#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fortify/game.hpp"
#include "fortify/graph.hpp"
#include "fortify/ratio.hpp"
#include "fortify/rng.hpp"

namespace oracle {

using fortify::BipartiteGraph;
using fortify::Edge;
using fortify::Game;
using fortify::Label;
using fortify::Ratio;
using fortify::Vertex;
using fortify::VertexSet;

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

inline Ratio reduced(std::int64_t num, std::int64_t den) {
  const std::int64_t g = gcd64(num, den);
  return Ratio(num / (g == 0 ? 1 : g), den / (g == 0 ? 1 : g));
}

/// Both sides enumerated jointly, weights per edge copy.
inline Ratio weighted_value(const Game& g, const std::vector<std::int64_t>& weights) {
  const auto n_l = g.graph().n_left();
  const auto n_r = g.graph().n_right();
  const auto edges = g.graph().edges();
  std::int64_t total = 0;
  for (auto w : weights) total += w;
  std::vector<Label> lab(n_l + n_r, 0);
  std::int64_t best = 0;
  while (true) {
    std::int64_t sat = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (g.relation(i).accepts(lab[edges[i].left], lab[n_l + edges[i].right])) sat += weights[i];
    }
    best = std::max(best, sat);
    std::size_t pos = 0;
    while (pos < lab.size()) {
      const std::size_t sigma = pos < n_l ? g.sigma_x() : g.sigma_y();
      if (++lab[pos] < sigma) break;
      lab[pos++] = 0;
    }
    if (pos == lab.size()) break;
  }
  return reduced(best, total);
}

inline Ratio value(const Game& g) {
  return weighted_value(g, std::vector<std::int64_t>(g.graph().num_edges(), 1));
}

inline Ratio subgame_value(const Game& g, const VertexSet& s, const VertexSet& t) {
  std::vector<std::int64_t> w;
  for (const Edge& e : g.graph().edges()) {
    const bool in = std::find(s.begin(), s.end(), e.left) != s.end() &&
                    std::find(t.begin(), t.end(), e.right) != t.end();
    w.push_back(in ? 1 : 0);
  }
  return weighted_value(g, w);
}

/// Second largest eigenvalue of H^T H via the symmetric solver, rescaled.
inline double lambda(const BipartiteGraph& h) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(h.n_right()),
                                            static_cast<Eigen::Index>(h.n_left()));
  for (const Edge& e : h.edges()) a(e.right, e.left) += 1.0;
  const double d = static_cast<double>(h.num_edges()) / static_cast<double>(h.n_left());
  a /= d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.transpose() * a);
  auto ev = solver.eigenvalues();
  std::vector<double> v(ev.data(), ev.data() + ev.size());
  std::sort(v.rbegin(), v.rend());
  const double second = v.size() > 1 ? std::sqrt(std::max(0.0, v[1])) : 0.0;
  return second * std::sqrt(static_cast<double>(h.n_right()) / static_cast<double>(h.n_left()));
}

/// pi over the right side from a uniform w in S and a uniform incident edge.
inline std::vector<double> induced(const BipartiteGraph& h, const VertexSet& s) {
  std::vector<double> deg(h.n_left(), 0.0);
  for (const Edge& e : h.edges()) deg[e.left] += 1.0;
  std::vector<double> pi(h.n_right(), 0.0);
  for (const Edge& e : h.edges()) {
    if (std::find(s.begin(), s.end(), e.left) != s.end()) pi[e.right] += 1.0 / deg[e.left] / s.size();
  }
  return pi;
}

inline double l1(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) s += std::abs(x - 1.0 / p.size());
  return s;
}

inline double l2_scaled(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) s += (x - 1.0 / p.size()) * (x - 1.0 / p.size());
  return s * p.size();
}

struct Worst {
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Bitmask enumeration of every subset of size >= k_min.
inline Worst worst_deviation(const BipartiteGraph& h, std::size_t k_min) {
  Worst w;
  const std::size_t n = h.n_left();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) < k_min) continue;
    VertexSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) s.push_back(static_cast<Vertex>(i));
    const auto pi = induced(h, s);
    w.l1 = std::max(w.l1, l1(pi));
    w.l2 = std::max(w.l2, l2_scaled(pi));
  }
  return w;
}

/// Random game with every vertex touched, small enough for the joint oracle.
inline Game random_tiny_game(std::uint64_t seed, std::size_t n_l, std::size_t n_r, std::size_t sx, std::size_t sy,
                             std::size_t extra_edges) {
  fortify::Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < std::max(n_l, n_r); ++i)
    edges.push_back({static_cast<Vertex>(i % n_l), static_cast<Vertex>(rng.below(n_r))});
  for (std::size_t i = 0; i < extra_edges; ++i)
    edges.push_back({static_cast<Vertex>(rng.below(n_l)), static_cast<Vertex>(rng.below(n_r))});
  std::vector<fortify::Relation> rel;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    fortify::Relation r(sx, sy);
    for (Label a = 0; a < sx; ++a)
      for (Label b = 0; b < sy; ++b)
        if (rng.unit() < 0.5) r.allow(a, b);
    rel.push_back(r);
  }
  return Game(n_l, n_r, sx, sy, edges, rel);
}

}  // namespace oracle
