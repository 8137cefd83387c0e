#include "fortify/concat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "fortify/error.hpp"
#include "fortify/fortifier.hpp"
#include "fortify/parallel.hpp"
#include "fortify/rng.hpp"

namespace fortify {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kAutoBruteForceLabelings = 200'000;
constexpr std::uint64_t kAutoRelationBits = 1U << 16;

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > kSaturated / base) return kSaturated;
    out *= base;
  }
  return out;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// For each right vertex x of h: the (w, slot) pairs with left_neighbors(w)[slot] == x.
std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> slots_by_target(const BipartiteGraph& h) {
  std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> out(h.n_right());
  for (Vertex w = 0; w < h.n_left(); ++w) {
    const auto nbrs = h.left_neighbors(w);
    for (std::uint32_t i = 0; i < nbrs.size(); ++i) out[nbrs[i]].emplace_back(w, i);
  }
  return out;
}

std::vector<std::int64_t> set_degrees(const BipartiteGraph& h, const VertexSet& s) {
  std::vector<std::int64_t> d(h.n_right(), 0);
  for (const Vertex w : s)
    for (const Vertex x : h.left_neighbors(w)) ++d[x];
  return d;
}

// Digit table: digits[a * width + i] is coordinate i of super-label a.
std::vector<Label> digit_table(std::uint64_t count, std::size_t width, std::size_t sigma) {
  std::vector<Label> digits(count * width);
  for (std::uint64_t a = 0; a < count; ++a) {
    std::uint64_t rest = a;
    for (std::size_t i = 0; i < width; ++i) {
      digits[a * width + i] = static_cast<Label>(rest % sigma);
      rest /= sigma;
    }
  }
  return digits;
}

}  // namespace

ConcatenatedGame::ConcatenatedGame(BipartiteGraph h1, Game base, BipartiteGraph h2)
    : h1_(std::move(h1)), base_(std::move(base)), h2_(std::move(h2)) {
  require(h1_.n_right() == base_.graph().n_left(), ErrorKind::kDimensionMismatch,
          "H1 right side has " + std::to_string(h1_.n_right()) + " vertices, game left side has " +
              std::to_string(base_.graph().n_left()));
  require(h2_.n_right() == base_.graph().n_right(), ErrorKind::kDimensionMismatch,
          "H2 right side has " + std::to_string(h2_.n_right()) + " vertices, game right side has " +
              std::to_string(base_.graph().n_right()));
  require(h1_.n_left() > 0 && h1_.is_left_regular() && h1_.left_degrees().front() > 0,
          ErrorKind::kNotLeftRegular, "H1 must be left-regular with positive degree");
  require(h2_.n_left() > 0 && h2_.is_left_regular() && h2_.left_degrees().front() > 0,
          ErrorKind::kNotLeftRegular, "H2 must be left-regular with positive degree");
}

std::uint64_t ConcatenatedGame::sigma_w() const noexcept {
  return saturating_pow(base_.sigma_x(), h1_.left_degrees().front());
}

std::uint64_t ConcatenatedGame::sigma_z() const noexcept {
  return saturating_pow(base_.sigma_y(), h2_.left_degrees().front());
}

std::uint64_t ConcatenatedGame::num_derived_edges() const {
  std::uint64_t total = 0;
  for (const Edge& e : base_.graph().edges())
    total += static_cast<std::uint64_t>(h1_.right_degrees()[e.left]) * h2_.right_degrees()[e.right];
  return total;
}

std::vector<ConcatenatedGame::DerivedEdge> ConcatenatedGame::derived_edges() const {
  const auto left_slots = slots_by_target(h1_);
  const auto right_slots = slots_by_target(h2_);
  std::vector<DerivedEdge> out;
  out.reserve(num_derived_edges());
  const auto edges = base_.graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e)
    for (const auto& [w, i] : left_slots[edges[e].left])
      for (const auto& [z, j] : right_slots[edges[e].right]) out.push_back({w, z, i, j, e});
  return out;
}

bool ConcatenatedGame::materializable(std::uint64_t max_relation_bits) const {
  const std::uint64_t sw = sigma_w();
  const std::uint64_t sz = sigma_z();
  if (sw > std::numeric_limits<Label>::max() || sz > std::numeric_limits<Label>::max()) return false;
  const std::uint64_t bits = saturating_mul(sw, sz);
  if (bits > max_relation_bits) return false;
  return saturating_mul(bits, num_derived_edges()) <= (std::uint64_t{1} << 33);
}

Game ConcatenatedGame::derived_game(std::uint64_t max_relation_bits) const {
  require(materializable(max_relation_bits), ErrorKind::kBudgetExceeded,
          "derived alphabets " + std::to_string(sigma_w()) + " x " + std::to_string(sigma_z()) +
              " are too large to materialize");
  const std::size_t d1 = left_degree();
  const std::size_t d2 = right_degree();
  const std::uint64_t sw = sigma_w();
  const std::uint64_t sz = sigma_z();
  const std::vector<Label> dw = digit_table(sw, d1, base_.sigma_x());
  const std::vector<Label> dz = digit_table(sz, d2, base_.sigma_y());
  const std::vector<DerivedEdge> derived = derived_edges();
  std::vector<Edge> edges;
  std::vector<Relation> relations;
  edges.reserve(derived.size());
  relations.reserve(derived.size());
  for (const DerivedEdge& d : derived) {
    const Relation& psi = base_.relation(d.base_edge);
    Relation r(sw, sz);
    for (std::uint64_t a = 0; a < sw; ++a) {
      const Label da = dw[a * d1 + d.slot_w];
      for (std::uint64_t b = 0; b < sz; ++b)
        if (psi.accepts(da, dz[b * d2 + d.slot_z])) r.allow(static_cast<Label>(a), static_cast<Label>(b));
    }
    edges.push_back({d.w, d.z});
    relations.push_back(std::move(r));
  }
  return {n_left(), n_right(), sw, sz, std::move(edges), std::move(relations)};
}

std::vector<std::int64_t> ConcatenatedGame::rectangle_weights(const VertexSet& s, const VertexSet& t) const {
  const std::vector<std::int64_t> ds = set_degrees(h1_, normalize_set(s, n_left()));
  const std::vector<std::int64_t> dt = set_degrees(h2_, normalize_set(t, n_right()));
  const auto edges = base_.graph().edges();
  std::vector<std::int64_t> weights(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) weights[e] = ds[edges[e].left] * dt[edges[e].right];
  return weights;
}

ConcatenatedGame concatenate(const BipartiteGraph& h1, const Game& g, const BipartiteGraph& h2) {
  return {h1, g, h2};
}

namespace {

// Solves many rectangles of one concatenated game, materializing the derived
// game at most once.
class RectangleSolver {
 public:
  RectangleSolver(const ConcatenatedGame& cg, SubgameSolver solver, const ValueOptions& options)
      : cg_(cg), solver_(solver), options_(options) {
    const std::uint64_t limit = solver == SubgameSolver::kBruteForce ? (1U << 20) : kAutoRelationBits;
    if (solver != SubgameSolver::kReduction && cg.materializable(limit)) derived_ = cg.derived_game(limit);
    require(solver != SubgameSolver::kBruteForce || derived_.has_value(), ErrorKind::kBudgetExceeded,
            "derived game is too large for brute force");
  }

  SubgameValue solve(const VertexSet& s, const VertexSet& t) const {
    if (use_brute_force(s, t)) return {subgame_value(*derived_, s, t, options_), SubgameSolver::kBruteForce};
    const std::vector<std::int64_t> weights = cg_.rectangle_weights(s, t);
    return {weighted_value(cg_.base(), weights, options_), SubgameSolver::kReduction};
  }

 private:
  bool use_brute_force(const VertexSet& s, const VertexSet& t) const {
    if (!derived_) return false;
    if (solver_ == SubgameSolver::kBruteForce) return true;
    const std::uint64_t cost = std::min(saturating_pow(derived_->sigma_x(), s.size()),
                                        saturating_pow(derived_->sigma_y(), t.size()));
    return cost <= kAutoBruteForceLabelings;
  }

  const ConcatenatedGame& cg_;
  SubgameSolver solver_;
  ValueOptions options_;
  std::optional<Game> derived_;
};

using RectangleVisitor = std::function<void(const VertexSet&, const VertexSet&, std::uint64_t, unsigned)>;

std::vector<VertexSet> collect_subsets(std::size_t n, std::size_t k_min, const SubsetMode& mode) {
  std::vector<VertexSet> out;
  for_each_large_subset(n, k_min, mode, [&](const VertexSet& s, std::uint64_t, unsigned) { out.push_back(s); });
  return out;
}

std::uint64_t for_each_rectangle(std::size_t n_left, std::size_t n_right, double delta, const RectangleMode& mode,
                                 const RectangleVisitor& visit) {
  const std::size_t k_left = min_subset_size(delta, n_left);
  const std::size_t k_right = min_subset_size(delta, n_right);
  const std::uint64_t offset = mode.candidates.size();
  for (std::uint64_t c = 0; c < offset; ++c) {
    const VertexSet s = normalize_set(mode.candidates[c].left, n_left);
    const VertexSet t = normalize_set(mode.candidates[c].right, n_right);
    require(s.size() >= k_left && t.size() >= k_right, ErrorKind::kInvalidArgument,
            "candidate rectangle is smaller than the density threshold");
    visit(s, t, c, 0);
  }
  const unsigned jobs = std::max(1U, mode.jobs);
  if (mode.kind == SubsetMode::Kind::kExhaustive) {
    const std::uint64_t left_count = count_subsets_from(n_left, k_left);
    const std::uint64_t right_count = count_subsets_from(n_right, k_right);
    const std::uint64_t total = saturating_mul(left_count, right_count);
    require(total <= mode.budget, ErrorKind::kBudgetExceeded,
            "exhaustive audit needs " + std::to_string(total) + " rectangles, budget is " +
                std::to_string(mode.budget));
    const std::vector<VertexSet> lefts = collect_subsets(n_left, k_left, SubsetMode::exhaustive(mode.budget));
    const std::vector<VertexSet> rights = collect_subsets(n_right, k_right, SubsetMode::exhaustive(mode.budget));
    parallel_ranges(lefts.size(), jobs, [&](std::size_t begin, std::size_t end, unsigned worker) {
      for (std::size_t i = begin; i < end; ++i)
        for (std::size_t j = 0; j < rights.size(); ++j) visit(lefts[i], rights[j], offset + i * rights.size() + j, worker);
    });
    return offset + total;
  }
  const std::uint64_t right_seed = derive_seed(mode.seed, "rectangle-right");
  parallel_ranges(mode.trials, jobs, [&](std::size_t begin, std::size_t end, unsigned worker) {
    for (std::size_t i = begin; i < end; ++i)
      visit(sampled_subset(n_left, k_left, mode.seed, i), sampled_subset(n_right, k_right, right_seed, i),
            offset + i, worker);
  });
  return offset + mode.trials;
}

template <typename Stat>
struct WorstTracker {
  bool set = false;
  Stat value{};
  std::uint64_t index = 0;
  Rectangle rect;
  std::uint64_t empty = 0;
  std::string solver;

  void offer(const Stat& v, std::uint64_t i, const VertexSet& s, const VertexSet& t, const std::string& how) {
    if (!set || v > value || (v == value && i < index)) {
      set = true;
      value = v;
      index = i;
      rect = {s, t};
      solver = how;
    }
  }
  void merge(const WorstTracker& other) {
    empty += other.empty;
    if (other.set) offer(other.value, other.index, other.rect.left, other.rect.right, other.solver);
  }
};

void check_audit_args(double delta, double epsilon) {
  require(delta > 0.0 && delta <= 1.0, ErrorKind::kInvalidArgument, "density must lie in (0, 1]");
  require(epsilon >= 0.0, ErrorKind::kInvalidArgument, "epsilon must be non-negative");
}

template <typename Solve>
AuditReport exact_audit(std::size_t n_left, std::size_t n_right, double delta, double epsilon, const Ratio& base,
                        const RectangleMode& mode, const Solve& solve) {
  check_audit_args(delta, epsilon);
  const unsigned jobs = std::max(1U, mode.jobs);
  std::vector<WorstTracker<Ratio>> trackers(jobs);
  AuditReport report;
  report.delta = delta;
  report.epsilon = epsilon;
  report.mode = AuditMode::kExactValue;
  report.rectangles_checked =
      for_each_rectangle(n_left, n_right, delta, mode,
                         [&](const VertexSet& s, const VertexSet& t, std::uint64_t index, unsigned worker) {
                           auto& tr = trackers[worker % jobs];
                           try {
                             const SubgameValue v = solve(s, t);
                             tr.offer(v.result.value, index, s, t, to_string(v.solver_used));
                           } catch (const Error& e) {
                             if (e.kind() != ErrorKind::kEmptySubgame) throw;
                             ++tr.empty;
                           }
                         });
  WorstTracker<Ratio> worst;
  for (const auto& tr : trackers) worst.merge(tr);
  report.rectangles_empty = worst.empty;
  report.base_value = base.to_double();
  report.bound = report.base_value + epsilon;
  if (worst.set) {
    report.worst_value = worst.value;
    report.worst_statistic = worst.value.to_double();
    report.worst_rectangle = worst.rect;
    report.solver = worst.solver;
  }
  report.verdict = report.worst_statistic > report.bound + kBoundSlack ? Verdict::kViolated : Verdict::kRobust;
  return report;
}

}  // namespace

SubgameValue concatenated_subgame_value(const ConcatenatedGame& cg, const VertexSet& s, const VertexSet& t,
                                        SubgameSolver solver, const ValueOptions& options) {
  const VertexSet ns = normalize_set(s, cg.n_left());
  const VertexSet nt = normalize_set(t, cg.n_right());
  require(!ns.empty() && !nt.empty(), ErrorKind::kEmptySubgame, "rectangle side is empty");
  return RectangleSolver(cg, solver, options).solve(ns, nt);
}

SubgameValue concatenated_value(const ConcatenatedGame& cg, SubgameSolver solver, const ValueOptions& options) {
  return concatenated_subgame_value(cg, full_set(cg.n_left()), full_set(cg.n_right()), solver, options);
}

AuditReport audit_exact(const ConcatenatedGame& cg, double delta, double epsilon, const RectangleMode& mode,
                        const AuditOptions& options) {
  const Ratio base = game_value(cg.base(), options.value).value;
  const RectangleSolver solver(cg, options.solver, options.value);
  return exact_audit(cg.n_left(), cg.n_right(), delta, epsilon, base, mode,
                     [&](const VertexSet& s, const VertexSet& t) { return solver.solve(s, t); });
}

AuditReport audit_game(const Game& g, double delta, double epsilon, const RectangleMode& mode,
                       const ValueOptions& options) {
  const Ratio base = game_value(g, options).value;
  AuditReport report = exact_audit(g.graph().n_left(), g.graph().n_right(), delta, epsilon, base, mode,
                                   [&](const VertexSet& s, const VertexSet& t) {
                                     return SubgameValue{subgame_value(g, s, t, options), SubgameSolver::kBruteForce};
                                   });
  return report;
}

double measured_robustness(const Game& g, double delta, const ValueOptions& options) {
  const AuditReport report = audit_game(g, delta, 0.0, RectangleMode{}, options);
  return std::max(0.0, report.worst_statistic - report.base_value);
}

AuditReport audit_distance(const ConcatenatedGame& cg, double delta, double epsilon, const RectangleMode& mode) {
  check_audit_args(delta, epsilon);
  const Game& g = cg.base();
  const unsigned jobs = std::max(1U, mode.jobs);
  std::vector<WorstTracker<double>> trackers(jobs);
  AuditReport report;
  report.delta = delta;
  report.epsilon = epsilon;
  report.mode = AuditMode::kDistance;
  report.solver = "distance";
  report.rectangles_checked =
      for_each_rectangle(cg.n_left(), cg.n_right(), delta, mode,
                         [&](const VertexSet& s, const VertexSet& t, std::uint64_t index, unsigned worker) {
                           auto& tr = trackers[worker % jobs];
                           const Distribution mu_s = induced_distribution(cg.h1(), s);
                           const Distribution mu_t = induced_distribution(cg.h2(), t);
                           try {
                             const Distribution pi = edge_distribution(g, mu_s, mu_t);
                             tr.offer(l1_from_uniform(pi.weights), index, s, t, "distance");
                           } catch (const Error& e) {
                             if (e.kind() != ErrorKind::kZeroDenominator) throw;
                             ++tr.empty;
                           }
                         });
  WorstTracker<double> worst;
  for (const auto& tr : trackers) worst.merge(tr);
  report.rectangles_empty = worst.empty;
  report.base_value = game_value(g).value.to_double();
  report.bound = epsilon;
  if (worst.set) {
    report.worst_statistic = worst.value;
    report.worst_rectangle = worst.rect;
  }
  report.implied_value_bound = report.base_value + report.worst_statistic;
  report.verdict = report.worst_statistic > epsilon + kBoundSlack ? Verdict::kViolated : Verdict::kRobust;
  return report;
}

DeviationBound deviation_bound(const Game& g, const Distribution& mu_s, const Distribution& mu_t, double lambda0) {
  const BipartiteGraph& graph = g.graph();
  require(graph.is_biregular() && graph.num_edges() > 0, ErrorKind::kNotBiregular,
          "deviation bound needs a bi-regular game graph");
  require(mu_s.weights.size() == graph.n_left() && mu_t.weights.size() == graph.n_right(),
          ErrorKind::kDimensionMismatch, "distribution sizes do not match the game");
  mu_s.validate(graph.n_left());
  mu_t.validate(graph.n_right());
  const double n = static_cast<double>(graph.n_left());
  const double m = static_cast<double>(graph.n_right());
  const double d = static_cast<double>(graph.left_degree());
  const Distribution pi = edge_distribution(g, mu_s, mu_t);
  const double uniform_edge = 1.0 / (n * d);
  DeviationBound out;
  out.lambda0 = lambda0;
  const auto edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double product = mu_s.weights[edges[e].left] * mu_t.weights[edges[e].right] / (d / m);
    out.claim1 += std::abs(pi.weights[e] - product);
    out.claim2 += std::abs(product - uniform_edge);
  }
  out.total = l1_from_uniform(pi.weights);
  out.eps1 = std::max(l1_from_uniform(mu_s.weights), l1_from_uniform(mu_t.weights));
  out.eps2 = std::max(n * l2sq_from_uniform(mu_s.weights), m * l2sq_from_uniform(mu_t.weights));
  out.claim1_bound = lambda0 * out.eps2;
  out.claim2_bound = 2.0 * out.eps1 + out.eps1 * out.eps1 + lambda0 * out.eps2;
  out.bound = 2.0 * out.eps1 + out.eps1 * out.eps1 + 2.0 * lambda0 * out.eps2;
  return out;
}

std::string to_string(Verdict v) { return v == Verdict::kRobust ? "robust" : "violated"; }

std::string to_string(SubgameSolver s) {
  switch (s) {
    case SubgameSolver::kAuto: return "auto";
    case SubgameSolver::kBruteForce: return "brute-force";
    case SubgameSolver::kReduction: return "reduction";
  }
  return "auto";
}

}  // namespace fortify
