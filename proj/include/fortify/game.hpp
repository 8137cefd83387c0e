#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fortify/graph.hpp"
#include "fortify/ratio.hpp"

namespace fortify {

using Label = std::uint32_t;

/// Dense bitset over sigma_x * sigma_y label pairs; bit (a, b) is set iff the
/// pair is accepted.
class Relation {
 public:
  Relation() = default;
  Relation(std::size_t sigma_x, std::size_t sigma_y);

  static Relation full(std::size_t sigma_x, std::size_t sigma_y);
  static Relation from_pairs(std::size_t sigma_x, std::size_t sigma_y,
                             std::span<const std::pair<Label, Label>> pairs);
  /// Graph of the map a -> map[a].
  static Relation from_function(std::size_t sigma_y, std::span<const Label> map);

  std::size_t sigma_x() const noexcept { return sigma_x_; }
  std::size_t sigma_y() const noexcept { return sigma_y_; }

  bool accepts(Label a, Label b) const noexcept {
    const std::size_t bit = static_cast<std::size_t>(a) * sigma_y_ + b;
    return (bits_[bit >> 6] >> (bit & 63)) & 1U;
  }
  void allow(Label a, Label b);

  bool empty() const noexcept;
  std::size_t count() const noexcept;
  /// True iff every left label accepts exactly one right label.
  bool is_function() const noexcept;
  /// The function a -> b for a projection relation; throws NotProjection.
  std::vector<Label> as_function() const;
  std::vector<std::pair<Label, Label>> pairs() const;

  friend auto operator<=>(const Relation&, const Relation&) = default;

 private:
  std::size_t sigma_x_ = 0;
  std::size_t sigma_y_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct Labeling {
  std::vector<Label> left;
  std::vector<Label> right;
};

/// Two-prover game: a bipartite multigraph with one relation per edge copy.
/// Relations are stored parallel to graph().edges(); construction sorts the
/// (edge, relation) pairs jointly into canonical order.
class Game {
 public:
  Game() = default;
  Game(std::size_t n_left, std::size_t n_right, std::size_t sigma_x, std::size_t sigma_y,
       std::vector<Edge> edges, std::vector<Relation> relations);

  const BipartiteGraph& graph() const noexcept { return graph_; }
  std::size_t sigma_x() const noexcept { return sigma_x_; }
  std::size_t sigma_y() const noexcept { return sigma_y_; }
  std::span<const Relation> relations() const noexcept { return relations_; }
  const Relation& relation(std::size_t edge_index) const { return relations_.at(edge_index); }
  bool is_projection() const noexcept { return is_projection_; }

  /// Fraction of edge copies accepted by `labeling`.
  Ratio satisfied_fraction(const Labeling& labeling) const;

  friend bool operator==(const Game& a, const Game& b) {
    return a.graph_ == b.graph_ && a.sigma_x_ == b.sigma_x_ && a.sigma_y_ == b.sigma_y_ &&
           a.relations_ == b.relations_;
  }

 private:
  BipartiteGraph graph_;
  std::size_t sigma_x_ = 0;
  std::size_t sigma_y_ = 0;
  std::vector<Relation> relations_;
  bool is_projection_ = false;
};

enum class GroundSet { kLeftVertices, kRightVertices, kEdges };

struct Distribution {
  GroundSet ground = GroundSet::kLeftVertices;
  std::vector<double> weights;

  /// Checks non-negativity and that the weights sum to 1 within 1e-9.
  void validate(std::size_t expected_size) const;
  static Distribution uniform(GroundSet ground, std::size_t size);
  static Distribution point(GroundSet ground, std::size_t size, std::size_t index);
};

inline constexpr std::uint64_t kDefaultValueBudget = 100'000'000;

struct ValueOptions {
  /// Cap on labelings enumerated across all connected components.
  std::uint64_t budget = kDefaultValueBudget;
};

struct ValueResult {
  Ratio value;
  Labeling witness;
  std::uint64_t labelings_enumerated = 0;
};

/// Exact value by exhaustive search. Connected components are solved
/// independently; inside a component one side is enumerated in lexicographic
/// order (vertex 0 most significant) and the other side best-responds, which
/// gives the same maximum as enumerating both sides. The first maximiser found
/// is the witness.
ValueResult game_value(const Game& g, const ValueOptions& options = {});

/// Value when edge copy i carries integer weight weights[i] (zero-weight
/// copies are ignored). The value is the maximum accepted weight over the
/// total weight.
ValueResult weighted_value(const Game& g, std::span<const std::int64_t> weights,
                           const ValueOptions& options = {});

/// Value of the game restricted to edges inside S x T.
ValueResult subgame_value(const Game& g, const VertexSet& left_set, const VertexSet& right_set,
                          const ValueOptions& options = {});

/// Symmetrized projection game on (X, X): for every right vertex y and every
/// ordered pair of edge copies (x, y), (x', y), including a copy paired with
/// itself, an edge (x, x') accepting (a, a') iff pi_(x,y)(a) = pi_(x',y)(a').
Game symmetrize(const Game& g);

/// Conditional distribution of the verifier's edge when the endpoints are
/// weighted by mu_s and mu_t: each edge copy gets mu_s(x) mu_t(y) divided by
/// the sum of that product over all edge copies.
Distribution edge_distribution(const Game& g, const Distribution& mu_s, const Distribution& mu_t);

/// Random game on `h`: every label pair of every edge copy is accepted
/// independently with probability `density`.
Game random_game(const BipartiteGraph& h, std::size_t sigma_x, std::size_t sigma_y, double density,
                 std::uint64_t seed);

/// Random projection game on `h`: every edge copy gets a uniform map
/// Sigma_X -> Sigma_Y.
Game random_projection_game(const BipartiteGraph& h, std::size_t sigma_x, std::size_t sigma_y, std::uint64_t seed);

/// l1 distance of a distribution from uniform on its support size.
double l1_from_uniform(std::span<const double> p);
/// Squared l2 distance of a distribution from uniform.
double l2sq_from_uniform(std::span<const double> p);

}  // namespace fortify
