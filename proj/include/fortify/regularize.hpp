#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fortify/game.hpp"
#include "fortify/graph.hpp"

namespace fortify {

enum class Side { kLeft, kRight };

enum class GadgetSupplier {
  /// K_{d_v, d_v} repeated d / d_v times; lambda = 0 exactly. The common
  /// degree d is the lcm of the cloud sizes.
  kComplete,
  /// Seeded random d-regular graphs on d_v + d_v vertices, certified by exact
  /// lambda and redrawn until they meet the target.
  kRandom,
};

struct Gadget {
  Vertex vertex = 0;
  BipartiteGraph graph;
  double lambda = 0.0;
  std::optional<std::uint64_t> seed;
  std::size_t attempts = 0;
};

/// Gadgets for one side: vertex v of degree d_v gets a cloud C_v of d_v
/// vertices joined to the d_v edge slots of v by a d-regular gadget.
struct GadgetPlan {
  Side side = Side::kRight;
  std::vector<std::size_t> cloud_sizes;
  std::size_t degree = 0;
  double lambda_target = 0.0;
  GadgetSupplier supplier = GadgetSupplier::kComplete;
  std::uint64_t seed = 0;
  /// Gadgets of the vertices with positive degree, in vertex order.
  std::vector<Gadget> gadgets;
  double max_lambda = 0.0;
};

struct GadgetOptions {
  GadgetSupplier supplier = GadgetSupplier::kComplete;
  std::uint64_t seed = 0;
  /// Random supplier: gadget degree.
  std::size_t degree = 8;
  std::size_t max_attempts = 100;
  /// Refuse a complete-supplier degree above this.
  std::size_t max_degree = 4096;
};

/// Game with every edge copy repeated t times under the same relation.
Game duplicate_edges(const Game& g, std::size_t t);

/// Same game with the two sides exchanged.
Game transpose_game(const Game& g);

/// Builds and certifies the gadgets for one side. GadgetUnavailable when the
/// random supplier misses `lambda_target` or the complete degree is too large.
GadgetPlan plan_gadgets(const Game& g, Side side, double lambda_target, const GadgetOptions& options = {});

/// Replaces every vertex v of `plan.side` with its cloud. Gadget edge
/// (slot s, clone c) becomes an edge between the other endpoint of slot s and
/// clone c carrying the relation of slot s. Slots are the edge copies at v in
/// canonical edge order; clones of v are numbered consecutively after those of
/// lower vertices. Vertices of degree 0 disappear.
Game regularize_side(const Game& g, const GadgetPlan& plan);

/// For a labeling of regularize_side(g, plan): per cloud, the satisfied
/// fraction of gadget edges against delta_v, the expected satisfied fraction
/// of v's edges in g when v takes the label of a uniformly random clone.
struct CloudAccount {
  Vertex vertex = 0;
  double satisfied = 0.0;
  double delta_v = 0.0;
  double lambda = 0.0;
  double bound = 0.0;
  bool ok = false;
};

std::vector<CloudAccount> cloud_accounting(const Game& g, const GadgetPlan& plan, const Labeling& labeling);

struct BiregularizeOptions {
  GadgetOptions gadgets;
  /// Random supplier: largest duplication factor tried.
  std::size_t max_duplication = 32;
};

struct BiregularizeResult {
  Game game;
  std::size_t duplication = 1;
  GadgetPlan right_plan;
  GadgetPlan left_plan;
  std::size_t edges_in = 0;
  std::size_t edges_out = 0;
  double blowup = 0.0;
  /// size(G) * ((sigma_x + sigma_y) / eps)^5 divided by size(G).
  double reference_blowup = 0.0;
};

/// Right side with lambda target 0.9 eps / (2 sigma_y), then left side with
/// 0.9 eps / (2 sigma_x). With the random supplier edges are first duplicated
/// by the smallest t for which every cloud has at least `degree` slots and all
/// gadgets certify.
BiregularizeResult biregularize(const Game& g, double eps, const BiregularizeOptions& options = {});

std::string to_string(Side s);
std::string to_string(GadgetSupplier s);

}  // namespace fortify
