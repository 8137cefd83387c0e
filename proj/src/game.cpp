#include "fortify/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "fortify/error.hpp"
#include "fortify/rng.hpp"

namespace fortify {

// ---------------------------------------------------------------- Relation

Relation::Relation(std::size_t sigma_x, std::size_t sigma_y)
    : sigma_x_(sigma_x), sigma_y_(sigma_y), bits_((sigma_x * sigma_y + 63) / 64, 0) {
  require(sigma_x > 0 && sigma_y > 0, ErrorKind::kInvalidArgument, "alphabets must be nonempty");
}

Relation Relation::full(std::size_t sigma_x, std::size_t sigma_y) {
  Relation r(sigma_x, sigma_y);
  for (Label a = 0; a < sigma_x; ++a)
    for (Label b = 0; b < sigma_y; ++b) r.allow(a, b);
  return r;
}

Relation Relation::from_pairs(std::size_t sigma_x, std::size_t sigma_y,
                              std::span<const std::pair<Label, Label>> pairs) {
  Relation r(sigma_x, sigma_y);
  for (const auto& [a, b] : pairs) r.allow(a, b);
  return r;
}

Relation Relation::from_function(std::size_t sigma_y, std::span<const Label> map) {
  Relation r(map.size(), sigma_y);
  for (Label a = 0; a < map.size(); ++a) r.allow(a, map[a]);
  return r;
}

void Relation::allow(Label a, Label b) {
  require(a < sigma_x_ && b < sigma_y_, ErrorKind::kInvalidArgument,
          "label pair (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
  const std::size_t bit = static_cast<std::size_t>(a) * sigma_y_ + b;
  bits_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
}

bool Relation::empty() const noexcept {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t Relation::count() const noexcept {
  std::size_t total = 0;
  for (const std::uint64_t w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool Relation::is_function() const noexcept {
  for (Label a = 0; a < sigma_x_; ++a) {
    std::size_t hits = 0;
    for (Label b = 0; b < sigma_y_; ++b) hits += accepts(a, b) ? 1 : 0;
    if (hits != 1) return false;
  }
  return sigma_x_ > 0;
}

std::vector<Label> Relation::as_function() const {
  require(is_function(), ErrorKind::kNotProjection, "relation is not a function");
  std::vector<Label> map(sigma_x_);
  for (Label a = 0; a < sigma_x_; ++a)
    for (Label b = 0; b < sigma_y_; ++b)
      if (accepts(a, b)) map[a] = b;
  return map;
}

std::vector<std::pair<Label, Label>> Relation::pairs() const {
  std::vector<std::pair<Label, Label>> out;
  for (Label a = 0; a < sigma_x_; ++a)
    for (Label b = 0; b < sigma_y_; ++b)
      if (accepts(a, b)) out.emplace_back(a, b);
  return out;
}

// -------------------------------------------------------------------- Game

Game::Game(std::size_t n_left, std::size_t n_right, std::size_t sigma_x, std::size_t sigma_y,
           std::vector<Edge> edges, std::vector<Relation> relations)
    : sigma_x_(sigma_x), sigma_y_(sigma_y) {
  require(edges.size() == relations.size(), ErrorKind::kInvalidArgument,
          "need exactly one relation per edge");
  require(sigma_x > 0 && sigma_y > 0, ErrorKind::kInvalidArgument, "alphabets must be nonempty");
  for (const Relation& r : relations) {
    require(r.sigma_x() == sigma_x && r.sigma_y() == sigma_y, ErrorKind::kInvalidArgument,
            "relation alphabet does not match game alphabets");
  }
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (edges[i] != edges[j]) return edges[i] < edges[j];
    return relations[i] < relations[j];
  });
  std::vector<Edge> sorted_edges;
  sorted_edges.reserve(edges.size());
  relations_.reserve(edges.size());
  for (const std::size_t i : order) {
    sorted_edges.push_back(edges[i]);
    relations_.push_back(std::move(relations[i]));
  }
  graph_ = BipartiteGraph(n_left, n_right, std::move(sorted_edges));
  is_projection_ = std::all_of(relations_.begin(), relations_.end(),
                               [](const Relation& r) { return r.is_function(); });
}

Ratio Game::satisfied_fraction(const Labeling& labeling) const {
  require(labeling.left.size() == graph_.n_left() && labeling.right.size() == graph_.n_right(),
          ErrorKind::kInvalidArgument, "labeling size mismatch");
  require(graph_.num_edges() > 0, ErrorKind::kEmptySubgame, "game has no edges");
  std::int64_t hits = 0;
  const auto edges = graph_.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Label a = labeling.left[edges[i].left];
    const Label b = labeling.right[edges[i].right];
    require(a < sigma_x_ && b < sigma_y_, ErrorKind::kInvalidArgument, "label out of range");
    hits += relations_[i].accepts(a, b) ? 1 : 0;
  }
  return {hits, static_cast<std::int64_t>(edges.size())};
}

// ------------------------------------------------------------ Distribution

void Distribution::validate(std::size_t expected_size) const {
  require(weights.size() == expected_size, ErrorKind::kInvalidArgument,
          "distribution length " + std::to_string(weights.size()) + " does not match ground set " +
              std::to_string(expected_size));
  double total = 0.0;
  for (const double w : weights) {
    require(w >= 0.0 && std::isfinite(w), ErrorKind::kInvalidArgument,
            "distribution weights must be finite and non-negative");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorKind::kInvalidArgument,
          "distribution weights must sum to 1");
}

Distribution Distribution::uniform(GroundSet ground, std::size_t size) {
  require(size > 0, ErrorKind::kEmptySet, "uniform distribution over an empty set");
  return {ground, std::vector<double>(size, 1.0 / static_cast<double>(size))};
}

Distribution Distribution::point(GroundSet ground, std::size_t size, std::size_t index) {
  require(index < size, ErrorKind::kInvalidArgument, "point mass index out of range");
  Distribution d{ground, std::vector<double>(size, 0.0)};
  d.weights[index] = 1.0;
  return d;
}

// ----------------------------------------------------------- value search

namespace {

struct ComponentEdge {
  std::uint32_t enum_vertex;   // local index on the enumerated side
  std::uint32_t other_vertex;  // local index on the best-responding side
  std::size_t edge_index;
  std::int64_t weight;
};

struct Component {
  std::vector<Vertex> left;
  std::vector<Vertex> right;
  std::vector<std::size_t> edges;
};

std::vector<Component> components(const Game& g, std::span<const std::int64_t> weights) {
  const auto& graph = g.graph();
  const std::size_t n = graph.n_left() + graph.n_right();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  const auto edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (weights[i] == 0) continue;
    const std::size_t a = find(edges[i].left);
    const std::size_t b = find(graph.n_left() + edges[i].right);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> slot(n, SIZE_MAX);
  std::vector<Component> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (weights[i] == 0) continue;
    const std::size_t root = find(edges[i].left);
    if (slot[root] == SIZE_MAX) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].edges.push_back(i);
  }
  for (Component& c : out) {
    for (const std::size_t i : c.edges) {
      c.left.push_back(edges[i].left);
      c.right.push_back(edges[i].right);
    }
    for (auto* side : {&c.left, &c.right}) {
      std::sort(side->begin(), side->end());
      side->erase(std::unique(side->begin(), side->end()), side->end());
    }
  }
  return out;
}

// sigma^count, saturating at 2^63.
double labeling_count(std::size_t sigma, std::size_t count) {
  return std::pow(static_cast<double>(sigma), static_cast<double>(count));
}

struct ComponentResult {
  std::int64_t best = -1;
  std::vector<Label> enum_labels;
  std::vector<Label> other_labels;
  std::uint64_t enumerated = 0;
};

// Enumerates every labeling of the enumerated side with an odometer and keeps
// per-(other vertex, label) accepted weights up to date incrementally.
template <class Accepts>
ComponentResult solve_component(std::size_t n_enum, std::size_t sigma_enum, std::size_t n_other,
                                std::size_t sigma_other, const std::vector<ComponentEdge>& edges,
                                Accepts accepts) {
  std::vector<std::vector<std::size_t>> incident(n_enum);
  for (std::size_t i = 0; i < edges.size(); ++i) incident[edges[i].enum_vertex].push_back(i);

  std::vector<Label> labels(n_enum, 0);
  std::vector<std::int64_t> score(n_other * sigma_other, 0);
  std::vector<std::int64_t> best_other(n_other, 0);
  for (const ComponentEdge& e : edges) {
    for (Label b = 0; b < sigma_other; ++b)
      if (accepts(e.edge_index, 0, b)) score[e.other_vertex * sigma_other + b] += e.weight;
  }
  std::int64_t total = 0;
  for (std::size_t r = 0; r < n_other; ++r) {
    best_other[r] = *std::max_element(score.begin() + static_cast<std::ptrdiff_t>(r * sigma_other),
                                      score.begin() + static_cast<std::ptrdiff_t>((r + 1) * sigma_other));
    total += best_other[r];
  }

  ComponentResult result;
  std::vector<char> dirty(n_other, 0);
  std::vector<std::size_t> dirty_list;
  auto relabel = [&](std::size_t v, Label old_label, Label new_label) {
    for (const std::size_t ei : incident[v]) {
      const ComponentEdge& e = edges[ei];
      std::int64_t* row = &score[e.other_vertex * sigma_other];
      for (Label b = 0; b < sigma_other; ++b) {
        const int delta = static_cast<int>(accepts(e.edge_index, new_label, b)) -
                          static_cast<int>(accepts(e.edge_index, old_label, b));
        row[b] += delta * e.weight;
      }
      if (!dirty[e.other_vertex]) {
        dirty[e.other_vertex] = 1;
        dirty_list.push_back(e.other_vertex);
      }
    }
  };

  while (true) {
    ++result.enumerated;
    if (total > result.best) {
      result.best = total;
      result.enum_labels = labels;
    }
    // Odometer step: the last vertex is the fastest digit.
    std::size_t pos = n_enum;
    while (pos > 0) {
      --pos;
      const Label old_label = labels[pos];
      if (old_label + 1 < sigma_enum) {
        labels[pos] = old_label + 1;
        relabel(pos, old_label, labels[pos]);
        break;
      }
      labels[pos] = 0;
      relabel(pos, old_label, 0);
      if (pos == 0) {
        pos = SIZE_MAX;
        break;
      }
    }
    if (pos == SIZE_MAX || n_enum == 0) break;
    for (const std::size_t r : dirty_list) {
      const auto first = score.begin() + static_cast<std::ptrdiff_t>(r * sigma_other);
      const std::int64_t fresh = *std::max_element(first, first + static_cast<std::ptrdiff_t>(sigma_other));
      total += fresh - best_other[r];
      best_other[r] = fresh;
      dirty[r] = 0;
    }
    dirty_list.clear();
  }

  // Best response of the other side to the witness, lowest label on ties.
  std::vector<std::int64_t> final_score(n_other * sigma_other, 0);
  for (const ComponentEdge& e : edges) {
    for (Label b = 0; b < sigma_other; ++b)
      if (accepts(e.edge_index, result.enum_labels[e.enum_vertex], b))
        final_score[e.other_vertex * sigma_other + b] += e.weight;
  }
  result.other_labels.assign(n_other, 0);
  for (std::size_t r = 0; r < n_other; ++r) {
    const auto first = final_score.begin() + static_cast<std::ptrdiff_t>(r * sigma_other);
    result.other_labels[r] = static_cast<Label>(
        std::max_element(first, first + static_cast<std::ptrdiff_t>(sigma_other)) - first);
  }
  return result;
}

}  // namespace

ValueResult weighted_value(const Game& g, std::span<const std::int64_t> weights,
                           const ValueOptions& options) {
  const auto& graph = g.graph();
  require(weights.size() == graph.num_edges(), ErrorKind::kInvalidArgument,
          "one weight per edge copy is required");
  std::int64_t total_weight = 0;
  for (const std::int64_t w : weights) {
    require(w >= 0, ErrorKind::kInvalidArgument, "edge weights must be non-negative");
    total_weight += w;
  }
  require(total_weight > 0, ErrorKind::kEmptySubgame, "no edge carries positive weight");

  const auto comps = components(g, weights);
  // Decide the enumerated side per component and check the budget up front.
  std::vector<bool> enumerate_left(comps.size());
  double planned = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const double left_cost = labeling_count(g.sigma_x(), comps[c].left.size());
    const double right_cost = labeling_count(g.sigma_y(), comps[c].right.size());
    enumerate_left[c] = left_cost <= right_cost;
    planned += std::min(left_cost, right_cost);
  }
  require(planned <= static_cast<double>(options.budget), ErrorKind::kBudgetExceeded,
          "exhaustive search needs " + std::to_string(planned) + " labelings, budget is " +
              std::to_string(options.budget));

  ValueResult out;
  out.witness.left.assign(graph.n_left(), 0);
  out.witness.right.assign(graph.n_right(), 0);
  std::int64_t best_total = 0;
  const auto edges = graph.edges();
  const auto relations = g.relations();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const Component& comp = comps[c];
    auto local = [](const std::vector<Vertex>& side, Vertex v) {
      return static_cast<std::uint32_t>(std::lower_bound(side.begin(), side.end(), v) - side.begin());
    };
    std::vector<ComponentEdge> local_edges;
    local_edges.reserve(comp.edges.size());
    const bool left_side = enumerate_left[c];
    for (const std::size_t i : comp.edges) {
      const std::uint32_t l = local(comp.left, edges[i].left);
      const std::uint32_t r = local(comp.right, edges[i].right);
      local_edges.push_back({left_side ? l : r, left_side ? r : l, i, weights[i]});
    }
    ComponentResult res;
    if (left_side) {
      res = solve_component(comp.left.size(), g.sigma_x(), comp.right.size(), g.sigma_y(), local_edges,
                            [&](std::size_t e, Label a, Label b) { return relations[e].accepts(a, b); });
      for (std::size_t i = 0; i < comp.left.size(); ++i) out.witness.left[comp.left[i]] = res.enum_labels[i];
      for (std::size_t i = 0; i < comp.right.size(); ++i) out.witness.right[comp.right[i]] = res.other_labels[i];
    } else {
      res = solve_component(comp.right.size(), g.sigma_y(), comp.left.size(), g.sigma_x(), local_edges,
                            [&](std::size_t e, Label b, Label a) { return relations[e].accepts(a, b); });
      for (std::size_t i = 0; i < comp.right.size(); ++i) out.witness.right[comp.right[i]] = res.enum_labels[i];
      for (std::size_t i = 0; i < comp.left.size(); ++i) out.witness.left[comp.left[i]] = res.other_labels[i];
    }
    best_total += res.best;
    out.labelings_enumerated += res.enumerated;
  }
  out.value = Ratio(best_total, total_weight);
  return out;
}

ValueResult game_value(const Game& g, const ValueOptions& options) {
  const std::vector<std::int64_t> ones(g.graph().num_edges(), 1);
  return weighted_value(g, ones, options);
}

ValueResult subgame_value(const Game& g, const VertexSet& left_set, const VertexSet& right_set,
                          const ValueOptions& options) {
  const auto& graph = g.graph();
  require(!left_set.empty() && !right_set.empty(), ErrorKind::kEmptySubgame, "rectangle side is empty");
  std::vector<char> in_left(graph.n_left(), 0);
  std::vector<char> in_right(graph.n_right(), 0);
  for (const Vertex v : normalize_set(left_set, graph.n_left())) in_left[v] = 1;
  for (const Vertex v : normalize_set(right_set, graph.n_right())) in_right[v] = 1;
  std::vector<std::int64_t> weights(graph.num_edges(), 0);
  bool any = false;
  const auto edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (in_left[edges[i].left] && in_right[edges[i].right]) {
      weights[i] = 1;
      any = true;
    }
  }
  require(any, ErrorKind::kEmptySubgame, "no edge lies inside the rectangle");
  return weighted_value(g, weights, options);
}

Game random_game(const BipartiteGraph& h, std::size_t sigma_x, std::size_t sigma_y, double density,
                 std::uint64_t seed) {
  require(sigma_x > 0 && sigma_y > 0, ErrorKind::kInvalidArgument, "alphabets must be non-empty");
  require(density >= 0.0 && density <= 1.0, ErrorKind::kInvalidArgument, "density must lie in [0, 1]");
  Rng rng(derive_seed(seed, "random-game"));
  std::vector<Relation> relations;
  relations.reserve(h.num_edges());
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    Relation r(sigma_x, sigma_y);
    for (Label a = 0; a < sigma_x; ++a)
      for (Label b = 0; b < sigma_y; ++b)
        if (rng.unit() < density) r.allow(a, b);
    relations.push_back(std::move(r));
  }
  const auto edges = h.edges();
  return {h.n_left(), h.n_right(), sigma_x, sigma_y, {edges.begin(), edges.end()}, std::move(relations)};
}

Game random_projection_game(const BipartiteGraph& h, std::size_t sigma_x, std::size_t sigma_y, std::uint64_t seed) {
  require(sigma_x > 0 && sigma_y > 0, ErrorKind::kInvalidArgument, "alphabets must be non-empty");
  Rng rng(derive_seed(seed, "random-projection-game"));
  std::vector<Relation> relations;
  relations.reserve(h.num_edges());
  std::vector<Label> map(sigma_x);
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    for (Label& b : map) b = static_cast<Label>(rng.below(sigma_y));
    relations.push_back(Relation::from_function(sigma_y, map));
  }
  const auto edges = h.edges();
  return {h.n_left(), h.n_right(), sigma_x, sigma_y, {edges.begin(), edges.end()}, std::move(relations)};
}

Game symmetrize(const Game& g) {
  require(g.is_projection(), ErrorKind::kNotProjection, "symmetrize needs a projection game");
  const auto& graph = g.graph();
  std::vector<std::vector<Label>> maps;
  maps.reserve(graph.num_edges());
  for (const Relation& r : g.relations()) maps.push_back(r.as_function());
  // Edge copies grouped by right endpoint, in edge order.
  std::vector<std::vector<std::size_t>> by_right(graph.n_right());
  const auto edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) by_right[edges[i].right].push_back(i);

  std::vector<Edge> out_edges;
  std::vector<Relation> out_relations;
  for (const auto& copies : by_right) {
    for (const std::size_t i : copies) {
      for (const std::size_t j : copies) {
        Relation rel(g.sigma_x(), g.sigma_x());
        for (Label a = 0; a < g.sigma_x(); ++a)
          for (Label b = 0; b < g.sigma_x(); ++b)
            if (maps[i][a] == maps[j][b]) rel.allow(a, b);
        out_edges.push_back({edges[i].left, edges[j].left});
        out_relations.push_back(std::move(rel));
      }
    }
  }
  return {graph.n_left(), graph.n_left(), g.sigma_x(), g.sigma_x(), std::move(out_edges),
          std::move(out_relations)};
}

Distribution edge_distribution(const Game& g, const Distribution& mu_s, const Distribution& mu_t) {
  const auto& graph = g.graph();
  mu_s.validate(graph.n_left());
  mu_t.validate(graph.n_right());
  const auto edges = graph.edges();
  Distribution out{GroundSet::kEdges, std::vector<double>(edges.size(), 0.0)};
  double denominator = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out.weights[i] = mu_s.weights[edges[i].left] * mu_t.weights[edges[i].right];
    denominator += out.weights[i];
  }
  require(denominator > 0.0, ErrorKind::kZeroDenominator,
          "the supports of mu_S and mu_T touch no edge");
  for (double& w : out.weights) w /= denominator;
  return out;
}

double l1_from_uniform(std::span<const double> p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double total = 0.0;
  for (const double v : p) total += std::abs(v - u);
  return total;
}

double l2sq_from_uniform(std::span<const double> p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double total = 0.0;
  for (const double v : p) total += (v - u) * (v - u);
  return total;
}

}  // namespace fortify
