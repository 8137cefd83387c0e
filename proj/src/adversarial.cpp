#include "fortify/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fortify/error.hpp"
#include "fortify/fortifier.hpp"

namespace fortify {

namespace {

using Neighborhoods = std::vector<std::vector<Vertex>>;

// Moves the lowest-index S-neighbor of `from` onto `to`.
void move_edge(Neighborhoods& nbhd, Vertex from, Vertex to) {
  auto& src = nbhd[from];
  const Vertex w = src.front();
  src.erase(src.begin());
  auto& dst = nbhd[to];
  dst.insert(std::upper_bound(dst.begin(), dst.end(), w), w);
}

BipartiteGraph rebuild(const BipartiteGraph& h, const std::vector<char>& in_s, const Neighborhoods& nbhd) {
  std::vector<Edge> edges;
  edges.reserve(h.num_edges());
  for (const Edge& e : h.edges())
    if (!in_s[e.left]) edges.push_back(e);
  for (Vertex x = 0; x < nbhd.size(); ++x)
    for (const Vertex w : nbhd[x]) edges.push_back({w, x});
  return {h.n_left(), h.n_right(), std::move(edges)};
}

double measured_eps(const BipartiteGraph& h, double delta, SubsetMode mode, const VertexSet& s) {
  mode.candidates.push_back(s);
  return scan_deviations(h, delta, mode).worst_l1;
}

}  // namespace

SkewResult skew_extractor(const BipartiteGraph& h, const VertexSet& s, double eps, const SkewOptions& options) {
  require(h.n_left() > 0 && h.is_left_regular() && h.left_degrees().front() > 0, ErrorKind::kNotLeftRegular,
          "skew_extractor needs a left-regular graph");
  require(eps > 0.0 && eps < 1.0, ErrorKind::kInvalidArgument, "eps must lie in (0, 1)");
  const VertexSet set = normalize_set(s, h.n_left());
  require(!set.empty(), ErrorKind::kEmptySet, "S is empty");
  const std::size_t n = h.n_right();
  require(options.x1 < n, ErrorKind::kInvalidArgument, "x1 is not a right vertex");
  const std::size_t degree = h.left_degree();
  const std::size_t s_edges = set.size() * degree;
  require(s_edges % n == 0, ErrorKind::kParameterInfeasible,
          "|S| D = " + std::to_string(s_edges) + " is not divisible by |X| = " + std::to_string(n));

  SkewReport report;
  report.x1 = options.x1;
  report.delta = static_cast<double>(set.size()) / static_cast<double>(h.n_left());
  report.eps = eps;
  report.uniform_degree = s_edges / n;
  report.per_vertex_moves = static_cast<std::size_t>(std::floor(eps * static_cast<double>(report.uniform_degree) + 1e-9));
  require(report.per_vertex_moves >= 1, ErrorKind::kParameterInfeasible,
          "eps * |S| D / |X| = " + std::to_string(eps * static_cast<double>(report.uniform_degree)) +
              " is below 1, so no edge would move");
  report.relocation_budget = eps * static_cast<double>(s_edges);
  report.rounding_slack = (eps * static_cast<double>(report.uniform_degree) -
                           static_cast<double>(report.per_vertex_moves)) *
                          static_cast<double>(n - 1);
  report.target_mass = eps;

  std::vector<char> in_s(h.n_left(), 0);
  for (const Vertex w : set) in_s[w] = 1;
  Neighborhoods nbhd(n);
  for (const Vertex w : set)
    for (const Vertex x : h.left_neighbors(w)) nbhd[x].push_back(w);
  for (auto& list : nbhd) std::sort(list.begin(), list.end());

  const std::size_t t = report.uniform_degree;
  for (const auto& list : nbhd)
    report.step1_imbalance += list.size() > t ? list.size() - t : t - list.size();
  Vertex recipient = 0;
  for (Vertex donor = 0; donor < n; ++donor) {
    while (nbhd[donor].size() > t) {
      while (nbhd[recipient].size() >= t) ++recipient;
      move_edge(nbhd, donor, recipient);
      ++report.step1_relocated;
    }
  }
  BipartiteGraph uniform_stage = rebuild(h, in_s, nbhd);

  for (Vertex x = 0; x < n; ++x) {
    if (x == options.x1) continue;
    for (std::size_t i = 0; i < report.per_vertex_moves; ++i) move_edge(nbhd, x, options.x1);
    report.step2_relocated += report.per_vertex_moves;
  }
  report.edges_relocated = report.step1_relocated + report.step2_relocated;
  BipartiteGraph out = rebuild(h, in_s, nbhd);
  report.achieved_mass = static_cast<double>(nbhd[options.x1].size()) / static_cast<double>(s_edges);
  if (options.check) {
    report.original_eps = measured_eps(h, report.delta, *options.check, set);
    report.final_eps = measured_eps(out, report.delta, *options.check, set);
  }
  return {std::move(out), std::move(uniform_stage), report};
}

BadSubset find_bad_subset(const BipartiteGraph& h, double delta, double eps, double c) {
  require(h.n_left() > 0 && h.n_right() > 0 && h.is_left_regular() && h.left_degrees().front() > 0,
          ErrorKind::kNotLeftRegular, "find_bad_subset needs a left-regular graph");
  require(delta > 0.0 && delta <= 1.0 && eps > 0.0 && c > 0.0, ErrorKind::kInvalidArgument,
          "delta must lie in (0, 1], eps and c must be positive");
  const std::size_t m = h.n_left();
  const std::size_t n = h.n_right();
  const double d_avg = static_cast<double>(m * h.left_degree()) / static_cast<double>(n);
  const auto& deg = h.right_degrees();

  BadSubset out;
  const std::size_t low = static_cast<std::size_t>(
      std::count_if(deg.begin(), deg.end(), [&](std::size_t d) { return static_cast<double>(d) < 0.5 * d_avg; }));
  if (4 * low >= n) {
    out.which = BadSubsetCase::kLowDegree;
    out.subset = full_set(m);
    const SubsetDeviation dev = subset_deviation(h, out.subset);
    out.achieved = dev.l2_scaled;
    out.l1 = dev.l1;
    return out;
  }

  const auto want = static_cast<std::size_t>(std::ceil(c * eps * delta * delta * static_cast<double>(n) - 1e-9));
  const std::size_t x_count = std::max<std::size_t>(want, 1);
  for (Vertex x = 0; x < n && out.x_prime.size() < x_count; ++x) {
    const auto d = static_cast<double>(deg[x]);
    if (d > 0.5 * d_avg && d < 2.0 * d_avg) out.x_prime.push_back(x);
  }
  require(out.x_prime.size() == x_count, ErrorKind::kParameterInfeasible,
          "only " + std::to_string(out.x_prime.size()) + " mid-degree vertices, X' needs " + std::to_string(x_count));

  std::vector<char> in_s0(m, 0);
  for (const Vertex x : out.x_prime)
    for (const Vertex w : h.right_neighbors(x)) in_s0[w] = 1;
  const std::size_t s1_size = min_subset_size(delta, m);
  VertexSet s1;
  for (Vertex w = 0; w < m && s1.size() < s1_size; ++w)
    if (!in_s0[w]) s1.push_back(w);
  out.s1_disjoint = s1.size() == s1_size;
  for (Vertex w = 0; w < m && s1.size() < s1_size; ++w)
    if (in_s0[w]) s1.push_back(w);
  std::sort(s1.begin(), s1.end());
  VertexSet s2;
  for (Vertex w = 0; w < m; ++w)
    if (in_s0[w] || std::binary_search(s1.begin(), s1.end(), w)) s2.push_back(w);

  const SubsetDeviation d1 = subset_deviation(h, s1);
  const SubsetDeviation d2 = subset_deviation(h, s2);
  out.which = BadSubsetCase::kSplit;
  out.s1_achieved = d1.l2_scaled;
  out.s2_achieved = d2.l2_scaled;
  out.chose_s2 = d2.l2_scaled > d1.l2_scaled;
  out.subset = out.chose_s2 ? std::move(s2) : std::move(s1);
  out.achieved = out.chose_s2 ? d2.l2_scaled : d1.l2_scaled;
  out.l1 = out.chose_s2 ? d2.l1 : d1.l1;
  return out;
}

std::string to_string(BadSubsetCase c) { return c == BadSubsetCase::kLowDegree ? "low-degree" : "split"; }

}  // namespace fortify
