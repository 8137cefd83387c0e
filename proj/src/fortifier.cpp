#include "fortify/fortifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "fortify/error.hpp"

namespace fortify {

Distribution induced_distribution(const BipartiteGraph& h, const VertexSet& s) {
  require(!s.empty(), ErrorKind::kEmptySet, "induced distribution of an empty set");
  const VertexSet set = normalize_set(s, h.n_left());
  Distribution pi{GroundSet::kRightVertices, std::vector<double>(h.n_right(), 0.0)};
  const double share = 1.0 / static_cast<double>(set.size());
  for (const Vertex w : set) {
    const auto nbrs = h.left_neighbors(w);
    require(!nbrs.empty(), ErrorKind::kIsolatedVertex, "vertex " + std::to_string(w) + " has no neighbors");
    const double step = share / static_cast<double>(nbrs.size());
    for (const Vertex x : nbrs) pi.weights[x] += step;
  }
  return pi;
}

namespace {

SubsetDeviation regular_deviation(const BipartiteGraph& h, const VertexSet& set, std::size_t degree,
                                  std::vector<std::int64_t>& counts) {
  counts.assign(h.n_right(), 0);
  for (const Vertex w : set)
    for (const Vertex x : h.left_neighbors(w)) ++counts[x];
  const auto n = static_cast<std::int64_t>(h.n_right());
  const auto total = static_cast<std::int64_t>(set.size() * degree);
  // pi(x) - 1/n = (c(x) n - total) / (total n)
  std::int64_t l1_num = 0;
  long double l2_num = 0.0L;
  for (const std::int64_t c : counts) {
    const std::int64_t diff = c * n - total;
    l1_num += std::llabs(diff);
    l2_num += static_cast<long double>(diff) * static_cast<long double>(diff);
  }
  const long double tn = static_cast<long double>(total) * static_cast<long double>(n);
  return {static_cast<double>(static_cast<long double>(l1_num) / tn),
          static_cast<double>(l2_num / (static_cast<long double>(total) * tn))};
}

}  // namespace

SubsetDeviation subset_deviation(const BipartiteGraph& h, const VertexSet& s) {
  require(!s.empty(), ErrorKind::kEmptySet, "deviation of an empty set");
  if (h.n_left() > 0 && h.is_left_regular() && h.left_degrees().front() > 0) {
    std::vector<std::int64_t> counts;
    return regular_deviation(h, normalize_set(s, h.n_left()), h.left_degrees().front(), counts);
  }
  const Distribution pi = induced_distribution(h, s);
  return {l1_from_uniform(pi.weights),
          static_cast<double>(h.n_right()) * l2sq_from_uniform(pi.weights)};
}

DeviationScan scan_deviations(const BipartiteGraph& h, double delta, const SubsetMode& mode) {
  require(h.n_left() > 0 && h.n_right() > 0, ErrorKind::kEmptySet, "graph has an empty side");
  DeviationScan scan;
  scan.k_min = min_subset_size(delta, h.n_left());
  const std::size_t sizes = h.n_left() - scan.k_min + 1;
  const bool regular = h.is_left_regular() && h.left_degrees().front() > 0;
  const std::size_t degree = regular ? h.left_degrees().front() : 0;

  struct Best {
    double value = -1.0;
    std::uint64_t index = 0;
    VertexSet set;
    void offer(double v, std::uint64_t i, const VertexSet& s) {
      if (v > value || (v == value && i < index)) {
        value = v;
        index = i;
        set = s;
      }
    }
  };
  struct WorkerState {
    Best l1, l2;
    std::vector<double> l1_by_size, l2_by_size;
    std::vector<std::int64_t> counts;
    std::uint64_t visited = 0;
  };
  const unsigned jobs = std::max(1U, mode.jobs);
  std::vector<WorkerState> states(jobs);
  for (auto& st : states) {
    st.l1_by_size.assign(sizes, 0.0);
    st.l2_by_size.assign(sizes, 0.0);
  }
  for_each_large_subset(h.n_left(), scan.k_min, mode,
                        [&](const VertexSet& s, std::uint64_t index, unsigned worker) {
                          WorkerState& st = states[worker % jobs];
                          const SubsetDeviation dev = regular ? regular_deviation(h, s, degree, st.counts)
                                                              : subset_deviation(h, s);
                          st.l1.offer(dev.l1, index, s);
                          st.l2.offer(dev.l2_scaled, index, s);
                          const std::size_t slot = s.size() - scan.k_min;
                          st.l1_by_size[slot] = std::max(st.l1_by_size[slot], dev.l1);
                          st.l2_by_size[slot] = std::max(st.l2_by_size[slot], dev.l2_scaled);
                          ++st.visited;
                        });
  Best l1, l2;
  scan.worst_l1_by_size.assign(sizes, 0.0);
  scan.worst_l2_by_size.assign(sizes, 0.0);
  for (const auto& st : states) {
    if (st.l1.value >= 0.0) l1.offer(st.l1.value, st.l1.index, st.l1.set);
    if (st.l2.value >= 0.0) l2.offer(st.l2.value, st.l2.index, st.l2.set);
    for (std::size_t i = 0; i < sizes; ++i) {
      scan.worst_l1_by_size[i] = std::max(scan.worst_l1_by_size[i], st.l1_by_size[i]);
      scan.worst_l2_by_size[i] = std::max(scan.worst_l2_by_size[i], st.l2_by_size[i]);
    }
    scan.subsets += st.visited;
  }
  scan.worst_l1 = std::max(l1.value, 0.0);
  scan.worst_l1_subset = l1.set;
  scan.worst_l2 = std::max(l2.value, 0.0);
  scan.worst_l2_subset = l2.set;
  scan.l1_worst_at_boundary = scan.worst_l1_by_size.front() >= scan.worst_l1 - 1e-12;
  scan.l2_worst_at_boundary = scan.worst_l2_by_size.front() >= scan.worst_l2 - 1e-12;
  return scan;
}

std::variant<FortifierCertificate, Counterexample> check_fortifier(const BipartiteGraph& h, double delta,
                                                                   double eps1, double eps2,
                                                                   const SubsetMode& mode) {
  const DeviationScan scan = scan_deviations(h, delta, mode);
  if (scan.worst_l1 > eps1 + kBoundSlack) {
    const SubsetDeviation dev = subset_deviation(h, scan.worst_l1_subset);
    return Counterexample{scan.worst_l1_subset, dev.l1, dev.l2_scaled};
  }
  if (scan.worst_l2 > eps2 + kBoundSlack) {
    const SubsetDeviation dev = subset_deviation(h, scan.worst_l2_subset);
    return Counterexample{scan.worst_l2_subset, dev.l1, dev.l2_scaled};
  }
  FortifierCertificate cert;
  cert.delta = delta;
  cert.eps1 = eps1;
  cert.eps2 = eps2;
  cert.mode = mode.kind == SubsetMode::Kind::kExhaustive ? CertificateMode::kExhaustive : CertificateMode::kSampled;
  cert.one_sided = mode.kind == SubsetMode::Kind::kSampled;
  cert.trials = mode.trials;
  cert.seed = mode.seed;
  cert.subsets_checked = scan.subsets;
  cert.achieved_l1 = scan.worst_l1;
  cert.achieved_l2 = scan.worst_l2;
  cert.witness = scan.worst_l2_subset;
  cert.worst_at_boundary = scan.l1_worst_at_boundary && scan.l2_worst_at_boundary;
  return cert;
}

std::variant<ExtractorCertificate, Counterexample> check_extractor(const BipartiteGraph& h, double delta,
                                                                   double eps, const SubsetMode& mode) {
  const DeviationScan scan = scan_deviations(h, delta, mode);
  if (scan.worst_l1 > eps + kBoundSlack) {
    const SubsetDeviation dev = subset_deviation(h, scan.worst_l1_subset);
    return Counterexample{scan.worst_l1_subset, dev.l1, dev.l2_scaled};
  }
  ExtractorCertificate cert;
  cert.delta = delta;
  cert.eps = eps;
  cert.mode = mode.kind == SubsetMode::Kind::kExhaustive ? CertificateMode::kExhaustive : CertificateMode::kSampled;
  cert.one_sided = mode.kind == SubsetMode::Kind::kSampled;
  cert.trials = mode.trials;
  cert.seed = mode.seed;
  cert.subsets_checked = scan.subsets;
  cert.achieved_l1 = scan.worst_l1;
  cert.witness = scan.worst_l1_subset;
  return cert;
}

FortifierCertificate fortifier_from_expander(const ExpanderCertificate& cert, double delta) {
  require(delta > 0.0 && delta <= 1.0, ErrorKind::kInvalidArgument, "density must lie in (0, 1]");
  require(cert.lambda >= 0.0, ErrorKind::kInvalidArgument, "lambda must be non-negative");
  FortifierCertificate out;
  out.delta = delta;
  out.eps2 = cert.lambda * cert.lambda / delta;
  out.eps1 = std::sqrt(out.eps2);
  out.mode = CertificateMode::kSpectral;
  out.lambda = cert.lambda;
  return out;
}

BipartiteGraph product_graph(const BipartiteGraph& h1, const BipartiteGraph& h2) {
  require(h1.n_right() == h2.n_left(), ErrorKind::kDimensionMismatch,
          "inner dimensions differ: " + std::to_string(h1.n_right()) + " vs " + std::to_string(h2.n_left()));
  std::vector<Edge> edges;
  for (Vertex v = 0; v < h1.n_left(); ++v)
    for (const Vertex w : h1.left_neighbors(v))
      for (const Vertex x : h2.left_neighbors(w)) edges.push_back({v, x});
  return {h1.n_left(), h2.n_right(), std::move(edges)};
}

ProductFortifier product_fortifier(const BipartiteGraph& h1, const ExtractorCertificate& ext,
                                   const BipartiteGraph& h2, const ExpanderCertificate& exp) {
  require(h1.n_right() == h2.n_left(), ErrorKind::kDimensionMismatch, "inner dimensions differ");
  require(h1.is_biregular(), ErrorKind::kNotBiregular, "extractor must be bi-regular");
  require(h2.is_biregular(), ErrorKind::kNotBiregular, "expander must be bi-regular");
  ProductFortifier out{product_graph(h1, h2), {}};
  out.certificate.delta = ext.delta;
  out.certificate.eps1 = ext.eps;
  out.certificate.eps2 = exp.lambda * exp.lambda * ext.eps / ext.delta;
  out.certificate.mode = CertificateMode::kProduct;
  out.certificate.lambda = exp.lambda;
  out.certificate.extractor_eps = ext.eps;
  out.certificate.one_sided = ext.one_sided;
  return out;
}

}  // namespace fortify
