#include "fortify/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fortify/error.hpp"
#include "fortify/rng.hpp"

namespace fortify {

Eigen::MatrixXd normalized_adjacency(const BipartiteGraph& h) {
  const double degree = static_cast<double>(h.left_degree());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(h.n_right()),
                                            static_cast<Eigen::Index>(h.n_left()));
  for (const Edge& e : h.edges()) m(e.right, e.left) += 1.0 / degree;
  return m;
}

namespace {

double power_sigma2(const Eigen::MatrixXd& h, const PowerIterationOptions& options, std::size_t& iterations) {
  const Eigen::Index n = h.cols();
  if (n < 2) return 0.0;
  const Eigen::MatrixXd gram = h.transpose() * h;
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Rng rng(0x5eed5eedULL);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 2.0 * rng.unit() - 1.0;
  v -= u.dot(v) * u;
  v.normalize();
  for (iterations = 1; iterations <= options.max_iterations; ++iterations) {
    Eigen::VectorXd w = gram * v;
    w -= u.dot(w) * u;  // deflate the top singular pair
    const double rho = v.dot(w);
    const double norm = w.norm();
    if (norm <= 1e-300) return 0.0;
    if ((w - rho * v).norm() <= options.tolerance) return std::sqrt(std::max(rho, 0.0));
    v = w / norm;
  }
  throw Error(ErrorKind::kNoConvergence,
              "power iteration did not converge in " + std::to_string(options.max_iterations) + " steps");
}

}  // namespace

ExpanderCertificate spectral_lambda(const BipartiteGraph& h, LambdaMethod method,
                                    const PowerIterationOptions& options) {
  require(h.n_left() > 0 && h.n_right() > 0 && h.is_biregular() && h.num_edges() > 0,
          ErrorKind::kNotBiregular, "spectral lambda needs a bi-regular graph");
  ExpanderCertificate cert;
  cert.n_left = h.n_left();
  cert.n_right = h.n_right();
  cert.left_degree = h.left_degree();
  cert.method = method;
  const Eigen::MatrixXd m = normalized_adjacency(h);
  double sigma2 = 0.0;
  if (method == LambdaMethod::kExactSvd) {
    cert.tolerance = 1e-12;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    sigma2 = sv.size() >= 2 ? sv(1) : 0.0;
  } else {
    cert.tolerance = options.tolerance;
    sigma2 = power_sigma2(m, options, cert.iterations);
  }
  const double scale = std::sqrt(static_cast<double>(h.n_right()) / static_cast<double>(h.n_left()));
  // Round-off can push a unit singular value a hair above 1.
  cert.lambda = std::clamp(sigma2 * scale, 0.0, 1.0);
  return cert;
}

BipartiteGraph random_biregular(std::size_t n_left, std::size_t n_right, std::size_t left_degree,
                                std::uint64_t seed) {
  require(n_left > 0 && n_right > 0 && left_degree > 0, ErrorKind::kInvalidArgument,
          "random_biregular needs positive sizes and degree");
  require((n_left * left_degree) % n_right == 0, ErrorKind::kDivisibilityError,
          "n_left * left_degree must be divisible by n_right");
  const std::size_t right_degree = n_left * left_degree / n_right;
  std::vector<Vertex> right_stubs;
  right_stubs.reserve(n_left * left_degree);
  for (Vertex x = 0; x < n_right; ++x)
    for (std::size_t j = 0; j < right_degree; ++j) right_stubs.push_back(x);
  Rng rng(derive_seed(seed, "random-biregular"));
  rng.shuffle(right_stubs);
  std::vector<Edge> edges;
  edges.reserve(right_stubs.size());
  for (std::size_t i = 0; i < right_stubs.size(); ++i)
    edges.push_back({static_cast<Vertex>(i / left_degree), right_stubs[i]});
  return {n_left, n_right, std::move(edges)};
}

CertifiedExpander random_expander(std::size_t n_left, std::size_t n_right, std::size_t left_degree,
                                  std::uint64_t seed, double target_lambda, std::size_t max_attempts) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t attempt_seed = derive_seed(seed, "expander-attempt", attempt);
    BipartiteGraph g = random_biregular(n_left, n_right, left_degree, attempt_seed);
    ExpanderCertificate cert = spectral_lambda(g);
    if (cert.lambda <= target_lambda) {
      cert.seed = attempt_seed;
      return {std::move(g), cert, attempt + 1};
    }
  }
  throw Error(ErrorKind::kGadgetUnavailable,
              "no " + std::to_string(left_degree) + "-regular graph on " + std::to_string(n_left) + "+" +
                  std::to_string(n_right) + " vertices reached lambda <= " + std::to_string(target_lambda) +
                  " in " + std::to_string(max_attempts) + " attempts");
}

double mixing_discrepancy(const BipartiteGraph& h, const VertexSet& a, const VertexSet& b) {
  require(h.n_left() == h.n_right(), ErrorKind::kSizeMismatch, "mixing discrepancy needs |P| = |Q|");
  require(h.is_biregular() && h.num_edges() > 0, ErrorKind::kNotBiregular, "mixing discrepancy needs a bi-regular graph");
  std::vector<char> in_a(h.n_left(), 0);
  std::vector<char> in_b(h.n_right(), 0);
  const VertexSet na = normalize_set(a, h.n_left());
  const VertexSet nb = normalize_set(b, h.n_right());
  for (const Vertex v : na) in_a[v] = 1;
  for (const Vertex v : nb) in_b[v] = 1;
  std::size_t cross = 0;
  for (const Edge& e : h.edges()) cross += (in_a[e.left] && in_b[e.right]) ? 1 : 0;
  const double n = static_cast<double>(h.n_left());
  return std::abs(static_cast<double>(cross) / static_cast<double>(h.num_edges()) -
                  (static_cast<double>(na.size()) / n) * (static_cast<double>(nb.size()) / n));
}

MixingScan scan_mixing(const BipartiteGraph& h, std::uint64_t trials, std::uint64_t seed) {
  require(h.n_left() == h.n_right(), ErrorKind::kSizeMismatch, "mixing discrepancy needs |P| = |Q|");
  require(h.is_biregular() && h.num_edges() > 0, ErrorKind::kNotBiregular, "mixing discrepancy needs a bi-regular graph");
  const std::size_t n = h.n_left();
  const double total = static_cast<double>(h.num_edges());
  MixingScan scan;
  auto offer = [&](double disc, const VertexSet& a, const VertexSet& b) {
    ++scan.pairs;
    if (disc > scan.max_discrepancy) {
      scan.max_discrepancy = disc;
      scan.a = a;
      scan.b = b;
    }
  };
  auto from_mask = [](std::uint64_t mask) {
    VertexSet s;
    for (Vertex v = 0; mask != 0; ++v, mask >>= 1)
      if (mask & 1U) s.push_back(v);
    return s;
  };
  if (trials == 0) {
    require(n <= 12, ErrorKind::kBudgetExceeded, "exhaustive mixing scan needs at most 12 vertices per side");
    const std::uint64_t subsets = std::uint64_t{1} << n;
    std::vector<std::size_t> into(n);
    std::vector<std::size_t> cross(subsets);
    for (std::uint64_t am = 0; am < subsets; ++am) {
      std::fill(into.begin(), into.end(), 0);
      for (const Edge& e : h.edges())
        if ((am >> e.left) & 1U) ++into[e.right];
      const double pa = static_cast<double>(std::popcount(am)) / static_cast<double>(n);
      cross[0] = 0;
      for (std::uint64_t bm = 1; bm < subsets; ++bm) {
        const auto low = static_cast<std::size_t>(std::countr_zero(bm));
        cross[bm] = cross[bm & (bm - 1)] + into[low];
      }
      for (std::uint64_t bm = 0; bm < subsets; ++bm) {
        const double pb = static_cast<double>(std::popcount(bm)) / static_cast<double>(n);
        const double disc = std::abs(static_cast<double>(cross[bm]) / total - pa * pb);
        ++scan.pairs;
        if (disc > scan.max_discrepancy) {
          scan.max_discrepancy = disc;
          scan.a = from_mask(am);
          scan.b = from_mask(bm);
        }
      }
    }
    return scan;
  }
  scan.exhaustive = false;
  Rng rng(derive_seed(seed, "mixing-pairs"));
  for (std::uint64_t i = 0; i < trials; ++i) {
    const VertexSet a = rng.subset(n, static_cast<std::size_t>(rng.below(n + 1)));
    const VertexSet b = rng.subset(n, static_cast<std::size_t>(rng.below(n + 1)));
    offer(mixing_discrepancy(h, a, b), a, b);
  }
  return scan;
}

}  // namespace fortify
