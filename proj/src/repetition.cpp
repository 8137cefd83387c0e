#include "fortify/repetition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "fortify/error.hpp"
#include "fortify/fortifier.hpp"

namespace fortify {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, const std::string& what) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    require(base == 0 || out <= std::numeric_limits<std::uint64_t>::max() / base, ErrorKind::kBudgetExceeded,
            what + " overflows");
    out *= base;
  }
  return out;
}

// Odometer over k indices in [0, base), index 0 most significant.
bool advance(std::vector<std::size_t>& digits, std::size_t base) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

bool ratio_leq(std::uint64_t count, const Ratio& r, std::uint64_t total) {
  return static_cast<__int128>(count) * r.den() <= static_cast<__int128>(r.num()) * total;
}

double power(double base, std::size_t k) {
  double out = 1.0;
  for (std::size_t i = 0; i < k; ++i) out *= base;
  return out;
}

}  // namespace

Label tuple_coordinate(std::uint64_t label, std::size_t i, std::size_t sigma) {
  for (std::size_t j = 0; j < i; ++j) label /= sigma;
  return static_cast<Label>(label % sigma);
}

Game repeat_game(const Game& g, std::size_t k, const RepeatOptions& options) {
  require(k >= 1, ErrorKind::kInvalidArgument, "repetition count must be at least 1");
  const BipartiteGraph& graph = g.graph();
  const std::uint64_t n_left = checked_pow(graph.n_left(), k, "left vertex count");
  const std::uint64_t n_right = checked_pow(graph.n_right(), k, "right vertex count");
  const std::uint64_t sx = checked_pow(g.sigma_x(), k, "left alphabet");
  const std::uint64_t sy = checked_pow(g.sigma_y(), k, "right alphabet");
  const std::uint64_t num_edges = checked_pow(graph.num_edges(), k, "edge count");
  require(num_edges <= options.max_edges, ErrorKind::kBudgetExceeded,
          "repeated game has " + std::to_string(num_edges) + " edges, limit is " + std::to_string(options.max_edges));
  require(sx <= std::numeric_limits<Label>::max() && sy <= std::numeric_limits<Label>::max() &&
              n_left <= std::numeric_limits<Vertex>::max() && n_right <= std::numeric_limits<Vertex>::max(),
          ErrorKind::kBudgetExceeded, "repeated game does not fit 32-bit indices");
  const std::uint64_t bits = sx * sy;
  require(bits <= options.max_relation_bits && num_edges <= options.max_relation_bits / std::max<std::uint64_t>(bits, 1),
          ErrorKind::kBudgetExceeded, "repeated relation tables exceed the budget");

  std::vector<Label> left_digits(sx * k), right_digits(sy * k);
  for (std::uint64_t a = 0; a < sx; ++a)
    for (std::size_t i = 0; i < k; ++i) left_digits[a * k + i] = tuple_coordinate(a, i, g.sigma_x());
  for (std::uint64_t b = 0; b < sy; ++b)
    for (std::size_t i = 0; i < k; ++i) right_digits[b * k + i] = tuple_coordinate(b, i, g.sigma_y());

  const auto base_edges = graph.edges();
  std::vector<Edge> edges;
  std::vector<Relation> relations;
  edges.reserve(num_edges);
  relations.reserve(num_edges);
  std::vector<std::size_t> tuple(k, 0);
  if (!base_edges.empty()) {
    do {
      std::uint64_t left = 0, right = 0;
      for (std::size_t i = 0; i < k; ++i) {
        left = left * graph.n_left() + base_edges[tuple[i]].left;
        right = right * graph.n_right() + base_edges[tuple[i]].right;
      }
      Relation r(sx, sy);
      for (std::uint64_t a = 0; a < sx; ++a)
        for (std::uint64_t b = 0; b < sy; ++b) {
          bool ok = true;
          for (std::size_t i = 0; i < k && ok; ++i)
            ok = g.relation(tuple[i]).accepts(left_digits[a * k + i], right_digits[b * k + i]);
          if (ok) r.allow(static_cast<Label>(a), static_cast<Label>(b));
        }
      edges.push_back({static_cast<Vertex>(left), static_cast<Vertex>(right)});
      relations.push_back(std::move(r));
    } while (advance(tuple, base_edges.size()));
  }
  return {n_left, n_right, sx, sy, std::move(edges), std::move(relations)};
}

PartitionAccounting partition_accounting(const Game& g, std::size_t k, const Labeling& strategy, double delta,
                                         double epsilon, const Ratio& value_previous, const ValueOptions& options) {
  require(k >= 2, ErrorKind::kInvalidArgument, "partition accounting needs k >= 2");
  const BipartiteGraph& graph = g.graph();
  const std::size_t n_l = graph.n_left();
  const std::size_t n_r = graph.n_right();
  const auto edges = graph.edges();
  const std::size_t m = edges.size();
  require(m > 0, ErrorKind::kEmptySubgame, "game has no edges");
  require(strategy.left.size() == checked_pow(n_l, k, "left tuples") &&
              strategy.right.size() == checked_pow(n_r, k, "right tuples"),
          ErrorKind::kDimensionMismatch, "strategy does not match G^k");
  const std::size_t sx = g.sigma_x();
  const std::size_t sy = g.sigma_y();
  const std::uint64_t prefix_x = checked_pow(sx, k - 1, "label prefix");
  const std::uint64_t prefix_y = checked_pow(sy, k - 1, "label prefix");
  const std::size_t k_left = min_subset_size(delta, n_l);
  const std::size_t k_right = min_subset_size(delta, n_r);
  const Ratio base = game_value(g, options).value;

  PartitionAccounting out;
  out.k = k;
  out.total = checked_pow(m, k, "query count");
  out.rectangles_ok = true;
  std::map<std::pair<VertexSet, VertexSet>, Ratio> subgame_cache;

  std::vector<std::size_t> prefix(k - 1, 0);
  std::vector<std::uint64_t> code_x(n_l), code_y(n_r);
  do {
    std::uint64_t base_x = 0, base_y = 0;
    for (const std::size_t e : prefix) {
      base_x = base_x * n_l + edges[e].left;
      base_y = base_y * n_r + edges[e].right;
    }
    std::map<std::uint64_t, VertexSet> group_x, group_y;
    for (Vertex x = 0; x < n_l; ++x) {
      code_x[x] = strategy.left[base_x * n_l + x] % prefix_x;
      group_x[code_x[x]].push_back(x);
    }
    for (Vertex y = 0; y < n_r; ++y) {
      code_y[y] = strategy.right[base_y * n_r + y] % prefix_y;
      group_y[code_y[y]].push_back(y);
    }
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<std::uint64_t, std::uint64_t>> large;
    for (const Edge& e : edges) {
      const std::uint64_t cx = code_x[e.left];
      const std::uint64_t cy = code_y[e.right];
      bool accepting = true;
      for (std::size_t i = 0; i + 1 < k && accepting; ++i)
        accepting = g.relation(prefix[i]).accepts(tuple_coordinate(cx, i, sx), tuple_coordinate(cy, i, sy));
      if (!accepting) {
        ++out.a0;
        continue;
      }
      const Label a = tuple_coordinate(strategy.left[base_x * n_l + e.left], k - 1, sx);
      const Label b = tuple_coordinate(strategy.right[base_y * n_r + e.right], k - 1, sy);
      const std::size_t edge_index = static_cast<std::size_t>(&e - edges.data());
      const bool win = g.relation(edge_index).accepts(a, b);
      out.wins += win ? 1 : 0;
      if (group_x[cx].size() >= k_left && group_y[cy].size() >= k_right) {
        ++out.a1;
        out.wins_in_a1 += win ? 1 : 0;
        auto& slot = large[{cx, cy}];
        ++slot.first;
        slot.second += win ? 1 : 0;
      } else {
        ++out.a2;
        out.wins_in_a2 += win ? 1 : 0;
      }
    }
    for (const auto& [codes, counts] : large) {
      ++out.large_rectangles;
      auto key = std::make_pair(group_x[codes.first], group_y[codes.second]);
      auto it = subgame_cache.find(key);
      if (it == subgame_cache.end())
        it = subgame_cache.emplace(key, subgame_value(g, key.first, key.second, options).value).first;
      if (!ratio_leq(counts.second, it->second, counts.first)) out.rectangles_ok = false;
    }
  } while (advance(prefix, m));

  out.first_rounds_ok = ratio_leq(out.a1 + out.a2, value_previous, out.total);
  out.a1_ok = static_cast<double>(out.wins_in_a1) <=
              (base.to_double() + epsilon) * static_cast<double>(out.a1) + kBoundSlack;
  const double sigma = g.is_projection() ? static_cast<double>(sy) : static_cast<double>(sx * sy);
  out.a2_bound = 2.0 * delta * static_cast<double>(out.total) * power(sigma, k - 1);
  out.a2_ok = static_cast<double>(out.a2) <= out.a2_bound + kBoundSlack;
  return out;
}

RepetitionReport verify_recursion(const Game& g, std::size_t k, double delta, double epsilon,
                                  const RecursionOptions& options) {
  require(k >= 1, ErrorKind::kInvalidArgument, "repetition count must be at least 1");
  require(delta > 0.0 && delta <= 1.0 && epsilon >= 0.0, ErrorKind::kInvalidArgument,
          "delta must lie in (0, 1] and epsilon must be non-negative");
  RepetitionReport report;
  report.k = k;
  report.delta = delta;
  report.epsilon = epsilon;
  report.biregular = g.graph().is_biregular();

  Labeling top_witness;
  for (std::size_t j = 1; j <= k; ++j) {
    ValueResult r = j == 1 ? game_value(g, options.value) : game_value(repeat_game(g, j, options.repeat), options.value);
    report.values.push_back(r.value);
    if (j == k) top_witness = std::move(r.witness);
  }
  report.val_base = report.values.front();
  const double val = report.val_base.to_double();
  report.val_repeated = report.values.back().to_double();
  report.sandwich_ok = power(val, k) <= report.val_repeated + 1e-12 && report.val_repeated <= val + 1e-12;

  const AuditReport audit = audit_game(g, delta, epsilon, RectangleMode{}, options.value);
  report.robust = audit.verdict == Verdict::kRobust;
  report.measured_epsilon = std::max(0.0, audit.worst_statistic - audit.base_value);
  const double sigma = static_cast<double>(g.sigma_x() * g.sigma_y());
  report.precondition_ok = 2.0 * delta * power(sigma, k - 1) < epsilon;

  for (std::size_t j = 2; j <= k; ++j) {
    RecursionStep step;
    step.j = j;
    step.lhs = report.values[j - 1].to_double();
    step.rhs = report.values[j - 2].to_double() * (val + epsilon) + epsilon;
    step.precondition_ok = 2.0 * delta * power(sigma, j - 1) < epsilon;
    step.holds = step.lhs <= step.rhs + kBoundSlack;
    report.steps.push_back(step);
  }
  report.bound_general = power(val + epsilon, k) + static_cast<double>(k) * epsilon;
  if (report.robust && report.biregular && report.precondition_ok)
    report.bound_holds = report.val_repeated <= report.bound_general + kBoundSlack;

  if (options.check_projection && g.is_projection()) {
    ProjectionCheck pc;
    const Game sym = symmetrize(g);
    pc.symmetrized_biregular = sym.graph().is_biregular();
    pc.precondition_ok = 2.0 * delta * power(static_cast<double>(g.sigma_y()), k - 1) <= epsilon;
    if (!pc.symmetrized_biregular) {
      pc.skipped = "symmetrized game is not bi-regular";
    } else {
      try {
        pc.val_sym = game_value(sym, options.value).value.to_double();
        pc.val_sym_repeated =
            k == 1 ? pc.val_sym : game_value(repeat_game(sym, k, options.repeat), options.value).value.to_double();
        pc.robust = audit_game(sym, delta, epsilon, RectangleMode{}, options.value).verdict == Verdict::kRobust;
        pc.bound = power(pc.val_sym + epsilon, k) + static_cast<double>(k) * epsilon;
        if (pc.robust && pc.precondition_ok) pc.holds = pc.val_sym_repeated <= pc.bound + kBoundSlack;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kBudgetExceeded) throw;
        pc.skipped = e.what();
      }
    }
    report.projection = pc;
  }
  if (options.check_partition && k >= 2)
    report.partition = partition_accounting(g, k, top_witness, delta, epsilon, report.values[k - 2], options.value);
  return report;
}

}  // namespace fortify
