#include "fortify/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fortify/error.hpp"
#include "fortify/rng.hpp"
#include "fortify/spectral.hpp"

namespace fortify {

namespace {

// Edge copies at each right vertex, in canonical edge order.
std::vector<std::vector<std::size_t>> right_slots(const Game& g) {
  std::vector<std::vector<std::size_t>> slots(g.graph().n_right());
  const auto edges = g.graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) slots[edges[e].right].push_back(e);
  return slots;
}

Game regularize_right(const Game& g, const GadgetPlan& plan) {
  const auto slots = right_slots(g);
  const auto edges = g.graph().edges();
  std::vector<Edge> out_edges;
  std::vector<Relation> out_relations;
  std::size_t offset = 0;
  auto gadget = plan.gadgets.begin();
  for (Vertex y = 0; y < slots.size(); ++y) {
    if (slots[y].empty()) continue;
    require(gadget != plan.gadgets.end() && gadget->vertex == y &&
                gadget->graph.n_left() == slots[y].size() && gadget->graph.n_right() == slots[y].size(),
            ErrorKind::kDimensionMismatch, "gadget plan does not match vertex " + std::to_string(y));
    for (const Edge& ge : gadget->graph.edges()) {
      const std::size_t e = slots[y][ge.left];
      out_edges.push_back({edges[e].left, static_cast<Vertex>(offset + ge.right)});
      out_relations.push_back(g.relation(e));
    }
    offset += slots[y].size();
    ++gadget;
  }
  return {g.graph().n_left(), offset, g.sigma_x(), g.sigma_y(), std::move(out_edges), std::move(out_relations)};
}

BipartiteGraph repeated_complete(std::size_t size, std::size_t degree) {
  std::vector<Edge> edges;
  edges.reserve(size * degree);
  for (std::size_t r = 0; r < degree / size; ++r)
    for (Vertex s = 0; s < size; ++s)
      for (Vertex c = 0; c < size; ++c) edges.push_back({s, c});
  return {size, size, std::move(edges)};
}

Labeling swapped(const Labeling& l) { return {l.right, l.left}; }

}  // namespace

Game duplicate_edges(const Game& g, std::size_t t) {
  require(t >= 1, ErrorKind::kInvalidArgument, "duplication factor must be at least 1");
  std::vector<Edge> edges;
  std::vector<Relation> relations;
  const auto base = g.graph().edges();
  edges.reserve(base.size() * t);
  relations.reserve(base.size() * t);
  for (std::size_t e = 0; e < base.size(); ++e)
    for (std::size_t i = 0; i < t; ++i) {
      edges.push_back(base[e]);
      relations.push_back(g.relation(e));
    }
  return {g.graph().n_left(), g.graph().n_right(), g.sigma_x(), g.sigma_y(), std::move(edges), std::move(relations)};
}

Game transpose_game(const Game& g) {
  std::vector<Edge> edges;
  std::vector<Relation> relations;
  const auto base = g.graph().edges();
  for (std::size_t e = 0; e < base.size(); ++e) {
    edges.push_back({base[e].right, base[e].left});
    Relation r(g.sigma_y(), g.sigma_x());
    for (const auto& [a, b] : g.relation(e).pairs()) r.allow(b, a);
    relations.push_back(std::move(r));
  }
  return {g.graph().n_right(), g.graph().n_left(), g.sigma_y(), g.sigma_x(), std::move(edges), std::move(relations)};
}

GadgetPlan plan_gadgets(const Game& g, Side side, double lambda_target, const GadgetOptions& options) {
  require(lambda_target >= 0.0, ErrorKind::kInvalidArgument, "lambda target must be non-negative");
  GadgetPlan plan;
  plan.side = side;
  plan.lambda_target = lambda_target;
  plan.supplier = options.supplier;
  plan.seed = options.seed;
  plan.cloud_sizes = side == Side::kRight ? g.graph().right_degrees() : g.graph().left_degrees();

  if (options.supplier == GadgetSupplier::kComplete) {
    std::size_t degree = 1;
    for (const std::size_t d : plan.cloud_sizes) {
      if (d == 0) continue;
      degree = std::lcm(degree, d);
      require(degree <= options.max_degree, ErrorKind::kGadgetUnavailable,
              "complete gadgets need degree lcm of cloud sizes, which exceeds " + std::to_string(options.max_degree));
    }
    plan.degree = degree;
  } else {
    require(options.degree >= 1, ErrorKind::kInvalidArgument, "gadget degree must be positive");
    plan.degree = options.degree;
  }

  for (Vertex v = 0; v < plan.cloud_sizes.size(); ++v) {
    const std::size_t size = plan.cloud_sizes[v];
    if (size == 0) continue;
    Gadget gadget;
    gadget.vertex = v;
    if (options.supplier == GadgetSupplier::kComplete) {
      gadget.graph = repeated_complete(size, plan.degree);
      gadget.lambda = 0.0;
      gadget.attempts = 1;
    } else {
      const std::uint64_t seed = derive_seed(options.seed, side == Side::kRight ? "gadget-right" : "gadget-left", v);
      CertifiedExpander ex = random_expander(size, size, plan.degree, seed, lambda_target, options.max_attempts);
      gadget.graph = std::move(ex.graph);
      gadget.lambda = ex.certificate.lambda;
      gadget.seed = ex.certificate.seed;
      gadget.attempts = ex.attempts;
    }
    plan.max_lambda = std::max(plan.max_lambda, gadget.lambda);
    plan.gadgets.push_back(std::move(gadget));
  }
  return plan;
}

Game regularize_side(const Game& g, const GadgetPlan& plan) {
  if (plan.side == Side::kRight) return regularize_right(g, plan);
  return transpose_game(regularize_right(transpose_game(g), plan));
}

std::vector<CloudAccount> cloud_accounting(const Game& g, const GadgetPlan& plan, const Labeling& labeling) {
  if (plan.side == Side::kLeft) {
    GadgetPlan right = plan;
    right.side = Side::kRight;
    return cloud_accounting(transpose_game(g), right, swapped(labeling));
  }
  const auto slots = right_slots(g);
  const auto edges = g.graph().edges();
  std::vector<CloudAccount> out;
  std::size_t offset = 0;
  for (const Gadget& gadget : plan.gadgets) {
    const auto& slot = slots.at(gadget.vertex);
    const std::size_t size = slot.size();
    require(labeling.right.size() >= offset + size, ErrorKind::kDimensionMismatch, "labeling is too short");
    auto sat = [&](std::size_t s, std::size_t c) {
      const std::size_t e = slot[s];
      return g.relation(e).accepts(labeling.left.at(edges[e].left), labeling.right[offset + c]);
    };
    CloudAccount acc;
    acc.vertex = gadget.vertex;
    acc.lambda = gadget.lambda;
    std::size_t satisfied = 0;
    for (const Edge& ge : gadget.graph.edges()) satisfied += sat(ge.left, ge.right) ? 1 : 0;
    acc.satisfied = static_cast<double>(satisfied) / static_cast<double>(gadget.graph.num_edges());
    std::size_t pairs = 0;
    for (std::size_t c = 0; c < size; ++c)
      for (std::size_t s = 0; s < size; ++s) pairs += sat(s, c) ? 1 : 0;
    acc.delta_v = static_cast<double>(pairs) / static_cast<double>(size * size);
    acc.bound = acc.delta_v + acc.lambda * static_cast<double>(g.sigma_y());
    acc.ok = acc.satisfied <= acc.bound + 1e-9;
    out.push_back(acc);
    offset += size;
  }
  return out;
}

BiregularizeResult biregularize(const Game& g, double eps, const BiregularizeOptions& options) {
  require(eps > 0.0, ErrorKind::kInvalidArgument, "eps must be positive");
  require(g.graph().num_edges() > 0, ErrorKind::kEmptySubgame, "game has no edges");
  const double right_target = 0.9 * eps / (2.0 * static_cast<double>(g.sigma_y()));
  const double left_target = 0.9 * eps / (2.0 * static_cast<double>(g.sigma_x()));

  BiregularizeResult out;
  const bool random = options.gadgets.supplier == GadgetSupplier::kRandom;
  const std::size_t max_t = random ? std::max<std::size_t>(options.max_duplication, 1) : 1;
  std::size_t min_degree = 0;
  for (const std::size_t d : g.graph().right_degrees())
    if (d > 0) min_degree = min_degree == 0 ? d : std::min(min_degree, d);
  std::string last_error = "no duplication factor tried";
  bool done = false;
  for (std::size_t t = 1; t <= max_t && !done; ++t) {
    if (random && min_degree * t < options.gadgets.degree) continue;
    const Game dup = t == 1 ? g : duplicate_edges(g, t);
    try {
      GadgetPlan right = plan_gadgets(dup, Side::kRight, right_target, options.gadgets);
      const Game mid = regularize_side(dup, right);
      GadgetPlan left = plan_gadgets(mid, Side::kLeft, left_target, options.gadgets);
      out.game = regularize_side(mid, left);
      out.right_plan = std::move(right);
      out.left_plan = std::move(left);
      out.duplication = t;
      done = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kGadgetUnavailable) throw;
      last_error = e.what();
    }
  }
  require(done, ErrorKind::kGadgetUnavailable, last_error);
  out.edges_in = g.graph().num_edges();
  out.edges_out = out.game.graph().num_edges();
  out.blowup = static_cast<double>(out.edges_out) / static_cast<double>(out.edges_in);
  out.reference_blowup = std::pow(static_cast<double>(g.sigma_x() + g.sigma_y()) / eps, 5.0);
  return out;
}

std::string to_string(Side s) { return s == Side::kLeft ? "left" : "right"; }

std::string to_string(GadgetSupplier s) { return s == GadgetSupplier::kComplete ? "complete" : "random"; }

}  // namespace fortify
