#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fortify/game.hpp"
#include "fortify/graph.hpp"
#include "fortify/subsets.hpp"

namespace fortify {

/// H1 o G o H2 on (W, Z). A label of w is a tuple of base labels, one per
/// entry of w's sorted neighbor list in H1 (parallel edges give separate
/// coordinates); coordinate i has positional weight sigma_x^i. The same holds
/// for z with H2 and sigma_y.
class ConcatenatedGame {
 public:
  /// One derived edge: base edge copy `base_edge` = (x, y), read from
  /// coordinate `slot_w` of w's label and `slot_z` of z's label.
  struct DerivedEdge {
    Vertex w;
    Vertex z;
    std::uint32_t slot_w;
    std::uint32_t slot_z;
    std::size_t base_edge;
  };

  ConcatenatedGame(BipartiteGraph h1, Game base, BipartiteGraph h2);

  const Game& base() const noexcept { return base_; }
  const BipartiteGraph& h1() const noexcept { return h1_; }
  const BipartiteGraph& h2() const noexcept { return h2_; }
  std::size_t n_left() const noexcept { return h1_.n_left(); }
  std::size_t n_right() const noexcept { return h2_.n_left(); }
  std::size_t left_degree() const { return h1_.left_degree(); }
  std::size_t right_degree() const { return h2_.left_degree(); }

  /// sigma_x^D1 and sigma_y^D2, saturating at UINT64_MAX.
  std::uint64_t sigma_w() const noexcept;
  std::uint64_t sigma_z() const noexcept;

  std::uint64_t num_derived_edges() const;
  std::vector<DerivedEdge> derived_edges() const;

  /// Whether derived_game() fits in `max_relation_bits` bits per relation.
  bool materializable(std::uint64_t max_relation_bits = 1U << 20) const;
  /// Explicit derived game with decoded relations; BudgetExceeded when the
  /// relation tables would exceed `max_relation_bits`.
  Game derived_game(std::uint64_t max_relation_bits = 1U << 20) const;

  /// Weight of each base edge copy (x, y) inside the rectangle S x T: the
  /// number of derived edges from S x T that decode to it, d_S(x) d_T(y).
  std::vector<std::int64_t> rectangle_weights(const VertexSet& s, const VertexSet& t) const;

 private:
  BipartiteGraph h1_;
  Game base_;
  BipartiteGraph h2_;
};

ConcatenatedGame concatenate(const BipartiteGraph& h1, const Game& g, const BipartiteGraph& h2);

enum class SubgameSolver {
  /// Brute force on the derived game when small enough, reduction otherwise.
  kAuto,
  /// Exhaustive labeling search on the explicit derived game.
  kBruteForce,
  /// Weighted value of the base game with rectangle_weights(S, T). Provers
  /// that answer each coordinate independently induce independent random
  /// base labels on x and y, so this weighted value is exactly the sub-game
  /// value (and a consistent base labeling attains it).
  kReduction,
};

struct SubgameValue {
  ValueResult result;
  SubgameSolver solver_used = SubgameSolver::kReduction;
};

/// Value of (H1 o G o H2) restricted to S x T.
SubgameValue concatenated_subgame_value(const ConcatenatedGame& cg, const VertexSet& s, const VertexSet& t,
                                        SubgameSolver solver = SubgameSolver::kAuto,
                                        const ValueOptions& options = {});

/// Value of the whole concatenated game.
SubgameValue concatenated_value(const ConcatenatedGame& cg, SubgameSolver solver = SubgameSolver::kAuto,
                                const ValueOptions& options = {});

struct Rectangle {
  VertexSet left;
  VertexSet right;
};

/// Rectangle stream shared by the audits. Exhaustive mode pairs every large
/// left subset with every large right subset (left outer). Sampled mode draws
/// `trials` pairs from the same seeded subset stream the fortifier checks use.
/// Candidate rectangles are always examined first.
struct RectangleMode {
  SubsetMode::Kind kind = SubsetMode::Kind::kExhaustive;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 5'000'000;
  std::vector<Rectangle> candidates;
  unsigned jobs = 1;
};

enum class AuditMode { kExactValue, kDistance };
enum class Verdict { kRobust, kViolated };

struct AuditReport {
  double delta = 0.0;
  double epsilon = 0.0;
  AuditMode mode = AuditMode::kExactValue;
  std::uint64_t rectangles_checked = 0;
  /// Large rectangles with no edge inside (their sub-game is undefined).
  std::uint64_t rectangles_empty = 0;
  Rectangle worst_rectangle;
  /// Exact mode: worst sub-game value. Distance mode: worst l1 distance.
  double worst_statistic = 0.0;
  std::optional<Ratio> worst_value;
  double base_value = 0.0;
  /// Exact mode: val(G) + epsilon. Distance mode: epsilon.
  double bound = 0.0;
  /// Distance mode: every sub-game value is at most val(G) + worst distance.
  std::optional<double> implied_value_bound;
  std::string solver;
  Verdict verdict = Verdict::kRobust;
};

struct AuditOptions {
  SubgameSolver solver = SubgameSolver::kAuto;
  ValueOptions value;
};

AuditReport audit_exact(const ConcatenatedGame& cg, double delta, double epsilon, const RectangleMode& mode,
                        const AuditOptions& options = {});

AuditReport audit_distance(const ConcatenatedGame& cg, double delta, double epsilon, const RectangleMode& mode);

/// Robustness audit of a plain game by exhaustive sub-game values.
AuditReport audit_game(const Game& g, double delta, double epsilon, const RectangleMode& mode,
                       const ValueOptions& options = {});

/// Smallest epsilon for which `g` is (delta, epsilon)-robust: the worst
/// sub-game value over large rectangles minus val(g), floored at 0.
double measured_robustness(const Game& g, double delta, const ValueOptions& options = {});

struct DeviationBound {
  double claim1 = 0.0;
  double claim2 = 0.0;
  double total = 0.0;
  double bound = 0.0;
  double claim1_bound = 0.0;
  double claim2_bound = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double lambda0 = 0.0;
};

/// Splits the distance of the rectangle edge distribution from uniform into
/// the normalisation error (claim1) and the product-vs-uniform error (claim2),
/// and evaluates the bound 2 eps1 + eps1^2 + 2 lambda0 eps2 with eps1, eps2
/// the achieved deviations of mu_S and mu_T.
DeviationBound deviation_bound(const Game& g, const Distribution& mu_s, const Distribution& mu_t, double lambda0);

std::string to_string(Verdict v);
std::string to_string(SubgameSolver s);

}  // namespace fortify
