#include "fortify/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "fortify/error.hpp"

#ifndef FORTIFY_VERSION
#define FORTIFY_VERSION "0.0.0"
#endif

namespace fortify {

const char* version() { return FORTIFY_VERSION; }

namespace {

template <typename T>
T get_field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorKind::kParseError, std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<Edge> edges_from_json(const Json& j) {
  require(j.is_array(), ErrorKind::kParseError, "'edges' must be an array");
  std::vector<Edge> edges;
  edges.reserve(j.size());
  for (const Json& e : j) {
    require(e.is_array() && e.size() == 2 && e[0].is_number_unsigned() && e[1].is_number_unsigned(),
            ErrorKind::kParseError, "each edge must be a pair of non-negative integers");
    const auto a = e[0].get<std::uint64_t>();
    const auto b = e[1].get<std::uint64_t>();
    require(a <= std::numeric_limits<Vertex>::max() && b <= std::numeric_limits<Vertex>::max(),
            ErrorKind::kParseError, "vertex index out of range");
    edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
  }
  return edges;
}

Json edges_to_json(std::span<const Edge> edges) {
  Json out = Json::array();
  for (const Edge& e : edges) out.push_back({e.left, e.right});
  return out;
}

Json set_to_json(const VertexSet& s) { return Json(s); }

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const BipartiteGraph& h) {
  return {{"n_left", h.n_left()}, {"n_right", h.n_right()}, {"edges", edges_to_json(h.edges())}};
}

BipartiteGraph graph_from_json(const Json& j) {
  return {get_field<std::size_t>(j, "n_left"), get_field<std::size_t>(j, "n_right"),
          edges_from_json(j.contains("edges") ? j.at("edges") : Json())};
}

Json to_json(const Game& g) {
  Json relations = Json::array();
  for (const Relation& r : g.relations()) {
    Json pairs = Json::array();
    for (const auto& [a, b] : r.pairs()) pairs.push_back({a, b});
    relations.push_back(std::move(pairs));
  }
  Json out{{"n_left", g.graph().n_left()},
           {"n_right", g.graph().n_right()},
           {"sigma_x", g.sigma_x()},
           {"sigma_y", g.sigma_y()},
           {"edges", edges_to_json(g.graph().edges())},
           {"relations", std::move(relations)}};
  if (g.is_projection()) {
    Json maps = Json::array();
    for (const Relation& r : g.relations()) maps.push_back(r.as_function());
    out["projection"] = std::move(maps);
  }
  return out;
}

Game game_from_json(const Json& j) {
  const auto n_left = get_field<std::size_t>(j, "n_left");
  const auto n_right = get_field<std::size_t>(j, "n_right");
  const auto sigma_x = get_field<std::size_t>(j, "sigma_x");
  const auto sigma_y = get_field<std::size_t>(j, "sigma_y");
  require(sigma_x > 0 && sigma_y > 0, ErrorKind::kParseError, "alphabets must be non-empty");
  std::vector<Edge> edges = edges_from_json(j.contains("edges") ? j.at("edges") : Json());
  std::vector<Relation> relations;
  relations.reserve(edges.size());
  if (j.contains("relations")) {
    const Json& rel = j.at("relations");
    require(rel.is_array() && rel.size() == edges.size(), ErrorKind::kParseError,
            "'relations' must be an array parallel to 'edges'");
    for (const Json& pairs : rel) {
      require(pairs.is_array(), ErrorKind::kParseError, "each relation must be an array of label pairs");
      Relation r(sigma_x, sigma_y);
      for (const Json& p : pairs) {
        require(p.is_array() && p.size() == 2 && p[0].is_number_unsigned() && p[1].is_number_unsigned(),
                ErrorKind::kParseError, "each accepted pair must be two non-negative labels");
        const auto a = p[0].get<std::uint64_t>();
        const auto b = p[1].get<std::uint64_t>();
        require(a < sigma_x && b < sigma_y, ErrorKind::kParseError, "label out of range");
        r.allow(static_cast<Label>(a), static_cast<Label>(b));
      }
      relations.push_back(std::move(r));
    }
  } else {
    require(j.contains("projection"), ErrorKind::kParseError, "game needs 'relations' or 'projection'");
    const Json& maps = j.at("projection");
    require(maps.is_array() && maps.size() == edges.size(), ErrorKind::kParseError,
            "'projection' must be an array parallel to 'edges'");
    for (const Json& m : maps) {
      std::vector<Label> map;
      try {
        map = m.get<std::vector<Label>>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::kParseError, std::string("bad projection map: ") + e.what());
      }
      require(map.size() == sigma_x, ErrorKind::kParseError, "projection map must have sigma_x entries");
      for (const Label b : map) require(b < sigma_y, ErrorKind::kParseError, "projection label out of range");
      relations.push_back(Relation::from_function(sigma_y, map));
    }
  }
  return {n_left, n_right, sigma_x, sigma_y, std::move(edges), std::move(relations)};
}

Json to_json(const ConcatenatedGame& cg) {
  return {{"base", to_json(cg.base())}, {"h1", to_json(cg.h1())}, {"h2", to_json(cg.h2())}};
}

ConcatenatedGame concatenated_from_json(const Json& j) {
  require(j.is_object() && j.contains("base") && j.contains("h1") && j.contains("h2"), ErrorKind::kParseError,
          "concatenated game needs 'base', 'h1' and 'h2'");
  return {graph_from_json(j.at("h1")), game_from_json(j.at("base")), graph_from_json(j.at("h2"))};
}

Json to_json(const Ratio& r) {
  return {{"num", r.num()}, {"den", r.den()}, {"text", r.to_string()}, {"value", r.to_double()}};
}

Json to_json(const ValueResult& v) {
  return {{"value", to_json(v.value)},
          {"witness", {{"left", v.witness.left}, {"right", v.witness.right}}},
          {"labelings_enumerated", v.labelings_enumerated}};
}

std::string to_string(CertificateMode m) {
  switch (m) {
    case CertificateMode::kExhaustive: return "exhaustive";
    case CertificateMode::kSampled: return "sampled";
    case CertificateMode::kSpectral: return "spectral";
    case CertificateMode::kProduct: return "product";
  }
  return "exhaustive";
}

std::string to_string(LambdaMethod m) { return m == LambdaMethod::kExactSvd ? "svd" : "power"; }

std::string to_string(AuditMode m) { return m == AuditMode::kExactValue ? "exact" : "distance"; }

Json to_json(const ExpanderCertificate& c) {
  return {{"lambda", c.lambda},       {"n_left", c.n_left},           {"n_right", c.n_right},
          {"left_degree", c.left_degree}, {"method", to_string(c.method)}, {"tolerance", c.tolerance},
          {"seed", optional_json(c.seed)}, {"iterations", c.iterations},    {"version", version()}};
}

Json to_json(const FortifierCertificate& c) {
  Json out{{"kind", "fortifier"},
           {"delta", c.delta},
           {"eps1", c.eps1},
           {"eps2", c.eps2},
           {"mode", to_string(c.mode)},
           {"one_sided", c.one_sided},
           {"trials", c.trials},
           {"seed", c.seed},
           {"subsets_checked", c.subsets_checked},
           {"lambda", optional_json(c.lambda)},
           {"extractor_eps", optional_json(c.extractor_eps)},
           {"achieved_l1", c.achieved_l1},
           {"achieved_l2", c.achieved_l2},
           {"worst_at_boundary", c.worst_at_boundary},
           {"version", version()}};
  out["witness"] = c.witness ? set_to_json(*c.witness) : Json(nullptr);
  return out;
}

Json to_json(const ExtractorCertificate& c) {
  Json out{{"kind", "extractor"},
           {"delta", c.delta},
           {"eps", c.eps},
           {"mode", to_string(c.mode)},
           {"one_sided", c.one_sided},
           {"trials", c.trials},
           {"seed", c.seed},
           {"subsets_checked", c.subsets_checked},
           {"achieved_l1", c.achieved_l1},
           {"version", version()}};
  out["witness"] = c.witness ? set_to_json(*c.witness) : Json(nullptr);
  return out;
}

Json to_json(const Counterexample& c) {
  return {{"kind", "counterexample"}, {"subset", set_to_json(c.subset)}, {"l1", c.l1}, {"l2_scaled", c.l2_scaled},
          {"version", version()}};
}

Json to_json(const DeviationScan& s) {
  return {{"k_min", s.k_min},
          {"subsets", s.subsets},
          {"worst_l1", s.worst_l1},
          {"worst_l1_subset", set_to_json(s.worst_l1_subset)},
          {"worst_l2", s.worst_l2},
          {"worst_l2_subset", set_to_json(s.worst_l2_subset)},
          {"worst_l1_by_size", s.worst_l1_by_size},
          {"worst_l2_by_size", s.worst_l2_by_size},
          {"l1_worst_at_boundary", s.l1_worst_at_boundary},
          {"l2_worst_at_boundary", s.l2_worst_at_boundary}};
}

Json to_json(const AuditReport& r) {
  Json out{{"delta", r.delta},
           {"epsilon", r.epsilon},
           {"mode", to_string(r.mode)},
           {"rectangles_checked", r.rectangles_checked},
           {"rectangles_empty", r.rectangles_empty},
           {"worst_rectangle", {{"left", set_to_json(r.worst_rectangle.left)}, {"right", set_to_json(r.worst_rectangle.right)}}},
           {"worst_statistic", r.worst_statistic},
           {"base_value", r.base_value},
           {"bound", r.bound},
           {"implied_value_bound", optional_json(r.implied_value_bound)},
           {"solver", r.solver},
           {"verdict", to_string(r.verdict)},
           {"version", version()}};
  out["worst_value"] = r.worst_value ? to_json(*r.worst_value) : Json(nullptr);
  return out;
}

Json to_json(const DeviationBound& b) {
  return {{"claim1", b.claim1},         {"claim2", b.claim2},           {"total", b.total},
          {"bound", b.bound},           {"claim1_bound", b.claim1_bound}, {"claim2_bound", b.claim2_bound},
          {"eps1", b.eps1},             {"eps2", b.eps2},               {"lambda0", b.lambda0}};
}

Json to_json(const SkewReport& r) {
  return {{"x1", r.x1},
          {"delta", r.delta},
          {"eps", r.eps},
          {"uniform_degree", r.uniform_degree},
          {"per_vertex_moves", r.per_vertex_moves},
          {"step1_relocated", r.step1_relocated},
          {"step2_relocated", r.step2_relocated},
          {"edges_relocated", r.edges_relocated},
          {"relocation_budget", r.relocation_budget},
          {"step1_imbalance", r.step1_imbalance},
          {"rounding_slack", r.rounding_slack},
          {"target_mass", r.target_mass},
          {"achieved_mass", r.achieved_mass},
          {"original_eps", optional_json(r.original_eps)},
          {"final_eps", optional_json(r.final_eps)},
          {"version", version()}};
}

Json to_json(const BadSubset& b) {
  return {{"subset", set_to_json(b.subset)},
          {"achieved", b.achieved},
          {"l1", b.l1},
          {"case", to_string(b.which)},
          {"x_prime", set_to_json(b.x_prime)},
          {"s1_achieved", b.s1_achieved},
          {"s2_achieved", b.s2_achieved},
          {"chose_s2", b.chose_s2},
          {"s1_disjoint", b.s1_disjoint},
          {"version", version()}};
}

Json to_json(const PartitionAccounting& p) {
  return {{"k", p.k},
          {"total", p.total},
          {"a0", p.a0},
          {"a1", p.a1},
          {"a2", p.a2},
          {"wins", p.wins},
          {"wins_in_a1", p.wins_in_a1},
          {"wins_in_a2", p.wins_in_a2},
          {"large_rectangles", p.large_rectangles},
          {"first_rounds_ok", p.first_rounds_ok},
          {"rectangles_ok", p.rectangles_ok},
          {"a1_ok", p.a1_ok},
          {"a2_bound", p.a2_bound},
          {"a2_ok", p.a2_ok}};
}

Json to_json(const RepetitionReport& r) {
  Json values = Json::array();
  for (const Ratio& v : r.values) values.push_back(to_json(v));
  Json steps = Json::array();
  for (const RecursionStep& s : r.steps)
    steps.push_back({{"j", s.j}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"precondition_ok", s.precondition_ok},
                     {"holds", s.holds}});
  Json out{{"k", r.k},
           {"delta", r.delta},
           {"epsilon", r.epsilon},
           {"val_base", to_json(r.val_base)},
           {"values", std::move(values)},
           {"val_repeated", r.val_repeated},
           {"biregular", r.biregular},
           {"robust", r.robust},
           {"measured_epsilon", r.measured_epsilon},
           {"precondition_ok", r.precondition_ok},
           {"sandwich_ok", r.sandwich_ok},
           {"steps", std::move(steps)},
           {"bound_general", r.bound_general},
           {"bound_holds", optional_json(r.bound_holds)},
           {"version", version()}};
  if (r.projection) {
    const ProjectionCheck& p = *r.projection;
    out["bound_projection"] = {{"symmetrized_biregular", p.symmetrized_biregular},
                               {"robust", p.robust},
                               {"precondition_ok", p.precondition_ok},
                               {"val_sym", p.val_sym},
                               {"val_sym_repeated", p.val_sym_repeated},
                               {"bound", p.bound},
                               {"holds", optional_json(p.holds)},
                               {"skipped", p.skipped}};
  } else {
    out["bound_projection"] = nullptr;
  }
  out["partition"] = r.partition ? to_json(*r.partition) : Json(nullptr);
  return out;
}

Json to_json(const GadgetPlan& p) {
  Json gadgets = Json::array();
  for (const Gadget& g : p.gadgets)
    gadgets.push_back({{"vertex", g.vertex}, {"size", g.graph.n_left()}, {"lambda", g.lambda},
                       {"seed", optional_json(g.seed)}, {"attempts", g.attempts}});
  return {{"side", to_string(p.side)},
          {"cloud_sizes", p.cloud_sizes},
          {"degree", p.degree},
          {"lambda_target", p.lambda_target},
          {"supplier", to_string(p.supplier)},
          {"seed", p.seed},
          {"max_lambda", p.max_lambda},
          {"gadgets", std::move(gadgets)}};
}

Json to_json(const BiregularizeResult& r) {
  return {{"duplication", r.duplication},
          {"right_plan", to_json(r.right_plan)},
          {"left_plan", to_json(r.left_plan)},
          {"edges_in", r.edges_in},
          {"edges_out", r.edges_out},
          {"blowup", r.blowup},
          {"reference_blowup", r.reference_blowup},
          {"version", version()}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kParseError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, "'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::kInvalidArgument, "cannot write '" + path + "'");
  out << text;
  require(out.good(), ErrorKind::kInvalidArgument, "failed writing '" + path + "'");
}

}  // namespace fortify
