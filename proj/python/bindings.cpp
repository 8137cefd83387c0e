// Python bindings. Graphs, games and reports cross the boundary as JSON text in
// the same schema the command-line tool reads and writes; the fortify package
// converts to and from dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <variant>
#include <vector>

#include "fortify/adversarial.hpp"
#include "fortify/concat.hpp"
#include "fortify/error.hpp"
#include "fortify/fortifier.hpp"
#include "fortify/io.hpp"
#include "fortify/regularize.hpp"
#include "fortify/repetition.hpp"
#include "fortify/spectral.hpp"

namespace py = pybind11;
using namespace fortify;

namespace {

std::string out(const Json& j) { return j.dump(); }
Json in(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("invalid JSON: ") + e.what());
  }
}

BipartiteGraph graph_arg(const std::string& text) { return graph_from_json(in(text)); }
Game game_arg(const std::string& text) { return game_from_json(in(text)); }

SubsetMode subset_mode(std::uint64_t trials, std::uint64_t seed, unsigned jobs,
                       const std::vector<VertexSet>& candidates) {
  SubsetMode m = trials > 0 ? SubsetMode::sampled(trials, seed) : SubsetMode::exhaustive();
  m.jobs = jobs;
  m.candidates = candidates;
  return m;
}

SubgameSolver solver_arg(const std::string& s) {
  if (s == "auto") return SubgameSolver::kAuto;
  if (s == "brute-force") return SubgameSolver::kBruteForce;
  if (s == "reduction") return SubgameSolver::kReduction;
  throw Error(ErrorKind::kInvalidArgument, "unknown solver '" + s + "'");
}

template <class Cert>
std::string verdict(const std::variant<Cert, Counterexample>& r) {
  if (std::holds_alternative<Counterexample>(r)) {
    Json j = to_json(std::get<Counterexample>(r));
    j["certified"] = false;
    return out(j);
  }
  Json j = to_json(std::get<Cert>(r));
  j["certified"] = true;
  return out(j);
}

}  // namespace

PYBIND11_MODULE(_fortify, m) {
  m.doc() = "Two-prover game fortification toolkit";
  m.attr("__version__") = version();

  static py::exception<Error> error(m, "FortifyError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("random_biregular", [](std::size_t n_left, std::size_t n_right, std::size_t degree, std::uint64_t seed) {
    return out(to_json(random_biregular(n_left, n_right, degree, seed)));
  });
  m.def("random_expander", [](std::size_t n_left, std::size_t n_right, std::size_t degree, std::uint64_t seed,
                              double target_lambda) {
    return out(to_json(random_expander(n_left, n_right, degree, seed, target_lambda).graph));
  });
  m.def("complete_bipartite", [](std::size_t n_left, std::size_t n_right) {
    return out(to_json(complete_bipartite(n_left, n_right)));
  });
  m.def("perfect_matching", [](std::size_t n) { return out(to_json(perfect_matching(n))); });
  m.def("bipartite_cycle", [](std::size_t n) { return out(to_json(bipartite_cycle(n))); });
  m.def("random_game", [](const std::string& graph, std::size_t sigma_x, std::size_t sigma_y, double density,
                          std::uint64_t seed) {
    return out(to_json(random_game(graph_arg(graph), sigma_x, sigma_y, density, seed)));
  });
  m.def("random_projection_game", [](const std::string& graph, std::size_t sigma_x, std::size_t sigma_y,
                                     std::uint64_t seed) {
    return out(to_json(random_projection_game(graph_arg(graph), sigma_x, sigma_y, seed)));
  });

  m.def("spectral_lambda", [](const std::string& graph, const std::string& method, double tol) {
    PowerIterationOptions p;
    p.tolerance = tol;
    const LambdaMethod lm = method == "power" ? LambdaMethod::kPowerIteration : LambdaMethod::kExactSvd;
    return out(to_json(spectral_lambda(graph_arg(graph), lm, p)));
  });
  m.def("mixing", [](const std::string& graph, std::uint64_t trials, std::uint64_t seed) {
    const BipartiteGraph h = graph_arg(graph);
    const MixingScan s = scan_mixing(h, trials, seed);
    return out(Json{{"max_discrepancy", s.max_discrepancy}, {"a", s.a}, {"b", s.b},
                    {"exhaustive", s.exhaustive}, {"lambda", spectral_lambda(h).lambda}});
  });

  m.def("game_value", [](const std::string& game, std::uint64_t budget) {
    ValueOptions v;
    if (budget > 0) v.budget = budget;
    return out(to_json(game_value(game_arg(game), v)));
  });
  m.def("symmetrize", [](const std::string& game) { return out(to_json(symmetrize(game_arg(game)))); });

  m.def("concatenate", [](const std::string& h1, const std::string& game, const std::string& h2) {
    return out(to_json(concatenate(graph_arg(h1), game_arg(game), graph_arg(h2))));
  });
  m.def("derived_game", [](const std::string& cg) {
    return out(to_json(concatenated_from_json(in(cg)).derived_game()));
  });
  m.def("concatenated_value", [](const std::string& cg, const std::string& solver) {
    return out(to_json(concatenated_value(concatenated_from_json(in(cg)), solver_arg(solver)).result));
  });
  m.def("audit", [](const std::string& doc, double delta, double epsilon, const std::string& mode,
                    std::uint64_t trials, std::uint64_t seed, unsigned jobs,
                    const std::vector<std::pair<VertexSet, VertexSet>>& rectangles, const std::string& solver) {
    RectangleMode rm;
    if (trials > 0) {
      rm.kind = SubsetMode::Kind::kSampled;
      rm.trials = trials;
    }
    rm.seed = seed;
    rm.jobs = jobs;
    for (const auto& [l, r] : rectangles) rm.candidates.push_back({l, r});
    const Json j = in(doc);
    if (!j.contains("base")) {
      if (mode != "exact") throw Error(ErrorKind::kInvalidArgument, "distance audits need a concatenated game");
      return out(to_json(audit_game(game_from_json(j), delta, epsilon, rm)));
    }
    const ConcatenatedGame cg = concatenated_from_json(j);
    if (mode == "distance") return out(to_json(audit_distance(cg, delta, epsilon, rm)));
    return out(to_json(audit_exact(cg, delta, epsilon, rm, {solver_arg(solver), {}})));
  });

  m.def("scan_deviations", [](const std::string& graph, double delta, std::uint64_t trials, std::uint64_t seed,
                              unsigned jobs, const std::vector<VertexSet>& candidates) {
    return out(to_json(scan_deviations(graph_arg(graph), delta, subset_mode(trials, seed, jobs, candidates))));
  });
  m.def("check_fortifier", [](const std::string& graph, double delta, double eps1, double eps2,
                              std::uint64_t trials, std::uint64_t seed, unsigned jobs,
                              const std::vector<VertexSet>& candidates) {
    return verdict(
        check_fortifier(graph_arg(graph), delta, eps1, eps2, subset_mode(trials, seed, jobs, candidates)));
  });
  m.def("check_extractor", [](const std::string& graph, double delta, double eps, std::uint64_t trials,
                              std::uint64_t seed, unsigned jobs, const std::vector<VertexSet>& candidates) {
    return verdict(check_extractor(graph_arg(graph), delta, eps, subset_mode(trials, seed, jobs, candidates)));
  });
  m.def("fortifier_from_expander", [](const std::string& graph, double delta) {
    return out(to_json(fortifier_from_expander(spectral_lambda(graph_arg(graph)), delta)));
  });
  m.def("product_fortifier", [](const std::string& h1_text, const std::string& h2_text, double delta) {
    const BipartiteGraph h1 = graph_arg(h1_text), h2 = graph_arg(h2_text);
    const SubsetMode mode = SubsetMode::exhaustive();
    const double eps = scan_deviations(h1, delta, mode).worst_l1;
    const auto ext = check_extractor(h1, delta, eps, mode);
    const ProductFortifier pf = product_fortifier(h1, std::get<ExtractorCertificate>(ext), h2, spectral_lambda(h2));
    return out(Json{{"graph", to_json(pf.graph)}, {"certificate", to_json(pf.certificate)}});
  });

  m.def("skew_extractor", [](const std::string& graph, const VertexSet& s, double eps, Vertex x1,
                             std::uint64_t trials, std::uint64_t seed) {
    SkewOptions so;
    so.x1 = x1;
    if (trials > 0) so.check = SubsetMode::sampled(trials, seed);
    const SkewResult r = skew_extractor(graph_arg(graph), s, eps, so);
    return out(Json{{"graph", to_json(r.graph)}, {"report", to_json(r.report)}});
  });
  m.def("find_bad_subset", [](const std::string& graph, double delta, double eps, double c) {
    return out(to_json(find_bad_subset(graph_arg(graph), delta, eps, c)));
  });

  m.def("repeat_game", [](const std::string& game, std::size_t k) {
    return out(to_json(repeat_game(game_arg(game), k)));
  });
  m.def("verify_recursion", [](const std::string& game, std::size_t k, double delta, double epsilon) {
    return out(to_json(verify_recursion(game_arg(game), k, delta, epsilon)));
  });

  m.def("biregularize", [](const std::string& game, double eps, const std::string& supplier, std::size_t degree,
                           std::uint64_t seed) {
    BiregularizeOptions bo;
    bo.gadgets.supplier = supplier == "random" ? GadgetSupplier::kRandom : GadgetSupplier::kComplete;
    bo.gadgets.seed = seed;
    if (degree > 0) bo.gadgets.degree = degree;
    const BiregularizeResult r = biregularize(game_arg(game), eps, bo);
    return out(Json{{"game", to_json(r.game)}, {"manifest", to_json(r)}});
  });
}
