#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "fortify/adversarial.hpp"
#include "fortify/concat.hpp"
#include "fortify/error.hpp"
#include "fortify/fortifier.hpp"
#include "fortify/io.hpp"
#include "fortify/parallel.hpp"
#include "fortify/regularize.hpp"
#include "fortify/repetition.hpp"
#include "fortify/spectral.hpp"

namespace fortify::cli {

namespace {

constexpr int kExitViolated = 2;
constexpr const char* kBudgetEnv = "FORTIFY_BUDGET";

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) == 1, ErrorKind::kInvalidArgument,
          "SHA-256 digest failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

struct Context {
  std::string format = "json";
  unsigned jobs = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string manifest;
  std::string command;
  std::vector<std::string> argv;
  std::map<std::string, std::string> input_digests;
  std::optional<std::uint64_t> budget;

  Json load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::kParseError, "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    input_digests[path] = sha256_hex(buffer.str());
    try {
      return Json::parse(buffer.str());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParseError, "'" + path + "' is not valid JSON: " + e.what());
    }
  }

  /// Graph file, or the output of a command that wraps one under "graph".
  BipartiteGraph graph(const std::string& path) {
    const Json j = load(path);
    return graph_from_json(j.is_object() && j.contains("graph") && !j.contains("edges") ? j.at("graph") : j);
  }

  /// Game file, or the output of a command that wraps one under "game".
  Json game(const std::string& path) {
    const Json j = load(path);
    return j.is_object() && j.contains("game") && !j.contains("edges") ? j.at("game") : j;
  }

  unsigned workers() const { return jobs == 0 ? default_jobs() : jobs; }

  ValueOptions value_options() const {
    ValueOptions v;
    if (budget) v.budget = *budget;
    return v;
  }

  SubsetMode subset_mode(std::uint64_t trials) const {
    SubsetMode m = trials > 0 ? SubsetMode::sampled(trials, seed) : SubsetMode::exhaustive();
    if (budget) m.budget = *budget;
    m.jobs = workers();
    return m;
  }
};

void render_table(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      render_table(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    return;
  }
  os << std::left << std::setw(32) << prefix << ' ';
  if (j.is_array() && j.size() > 24) {
    os << "[" << j.size() << " items]\n";
  } else if (j.is_string()) {
    os << j.get<std::string>() << '\n';
  } else {
    os << j.dump() << '\n';
  }
}

std::string render(const Context& ctx, const Json& result) {
  if (ctx.format == "json") return dump_canonical(result);
  std::ostringstream os;
  render_table(result, "", os);
  return os.str();
}

void emit(Context& ctx, const Json& result, double seconds) {
  const std::string text = render(ctx, result);
  if (ctx.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(ctx.out, text);
  }
  if (!ctx.manifest.empty()) {
    Json inputs = Json::object();
    for (const auto& [path, digest] : ctx.input_digests) inputs[path] = digest;
    const Json manifest{{"command", ctx.command},
                        {"version", version()},
                        {"seed", ctx.seed},
                        {"jobs", ctx.workers()},
                        {"argv", ctx.argv},
                        {"format", ctx.format},
                        {"budget", ctx.budget ? Json(*ctx.budget) : Json(nullptr)},
                        {"input_digests", inputs},
                        {"output_digest", sha256_hex(text)},
                        {"wall_time_seconds", seconds}};
    write_text_file(ctx.manifest, dump_canonical(manifest));
  }
}

VertexSet parse_set(const std::string& text) {
  VertexSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        out.push_back(static_cast<Vertex>(std::stoul(item)));
      } else {
        const auto lo = std::stoul(item.substr(0, dash));
        const auto hi = std::stoul(item.substr(dash + 1));
        require(lo <= hi, ErrorKind::kInvalidArgument, "empty range '" + item + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<Vertex>(v));
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidArgument, "cannot parse vertex list '" + text + "'");
    }
  }
  return out;
}

Rectangle parse_rectangle(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorKind::kInvalidArgument, "rectangle must be LEFT:RIGHT, got '" + text + "'");
  return {parse_set(text.substr(0, colon)), parse_set(text.substr(colon + 1))};
}

bool is_concatenated(const Json& j) { return j.is_object() && j.contains("base"); }

SubgameSolver parse_solver(const std::string& s) {
  if (s == "brute-force") return SubgameSolver::kBruteForce;
  if (s == "reduction") return SubgameSolver::kReduction;
  return SubgameSolver::kAuto;
}

struct Options {
  std::string graph, game, h1, h2, kind = "biregular", method = "svd", mode = "exact", solver = "auto";
  std::string set, a, b, supplier = "complete", family = "fortifier";
  std::vector<std::string> rects, candidates;
  std::size_t n_left = 0, n_right = 0, degree = 0, sigma_x = 2, sigma_y = 2, k = 2, x1 = 0;
  double delta = 0.5, epsilon = 0.1, eps1 = 0.0, eps2 = 0.0, target = 1.0, density = 0.5, tol = 1e-9, c = 1.0;
  std::uint64_t trials = 0;
  bool materialize = false;
};

}  // namespace

int run(int argc, char** argv) {
  Context ctx;
  Options o;
  for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);

  CLI::App app{"Two-prover game fortification toolkit", "fortify"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", ctx.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--jobs", ctx.jobs, "Worker threads (0: FORTIFY_JOBS or 1)");
  app.add_option("--seed", ctx.seed, "Root seed for every random choice");
  app.add_option("--out", ctx.out, "Write the result here instead of stdout");
  app.add_option("--manifest", ctx.manifest, "Write a run manifest (inputs, digests, timing)");

  std::map<std::string, std::function<Json(int&)>> actions;
  auto sub = [&](const std::string& name, const std::string& help, std::function<Json(int&)> action,
                 CLI::App* parent = nullptr) {
    CLI::App* s = (parent ? parent : &app)->add_subcommand(name, help);
    s->fallthrough();
    actions[parent ? parent->get_name() + " " + name : name] = std::move(action);
    return s;
  };

  auto* gen = sub("gen", "Generate a graph or a game", [&](int&) -> Json {
    auto graph = [&]() -> BipartiteGraph {
      if (o.kind == "complete") return complete_bipartite(o.n_left, o.n_right);
      if (o.kind == "matching") return perfect_matching(o.n_left);
      if (o.kind == "cycle") return bipartite_cycle(o.n_left);
      if (!o.graph.empty()) return ctx.graph(o.graph);
      return random_biregular(o.n_left, o.n_right, o.degree, ctx.seed);
    };
    if (o.kind == "expander") {
      const CertifiedExpander ex = random_expander(o.n_left, o.n_right, o.degree, ctx.seed, o.target);
      Json out = to_json(ex.graph);
      out["certificate"] = to_json(ex.certificate);
      out["attempts"] = ex.attempts;
      return out;
    }
    if (o.kind == "game") return to_json(random_game(graph(), o.sigma_x, o.sigma_y, o.density, ctx.seed));
    if (o.kind == "projection-game") return to_json(random_projection_game(graph(), o.sigma_x, o.sigma_y, ctx.seed));
    return to_json(graph());
  });
  gen->add_option("--kind", o.kind, "Object to generate")
      ->check(CLI::IsMember({"biregular", "expander", "complete", "matching", "cycle", "game", "projection-game"}));
  gen->add_option("--n-left", o.n_left, "Left side size (n for matching and cycle)");
  gen->add_option("--n-right", o.n_right, "Right side size");
  gen->add_option("--degree", o.degree, "Left degree");
  gen->add_option("--target-lambda", o.target, "Expander: largest accepted lambda");
  gen->add_option("--graph", o.graph, "Games: underlying graph (otherwise a random bi-regular graph)");
  gen->add_option("--sigma-x", o.sigma_x, "Games: left alphabet size");
  gen->add_option("--sigma-y", o.sigma_y, "Games: right alphabet size");
  gen->add_option("--density", o.density, "Random games: acceptance probability per label pair");

  auto* lambda = sub("lambda", "Spectral expansion of a bi-regular graph", [&](int&) -> Json {
    PowerIterationOptions p;
    p.tolerance = o.tol;
    return to_json(spectral_lambda(ctx.graph(o.graph),
                                   o.method == "power" ? LambdaMethod::kPowerIteration : LambdaMethod::kExactSvd, p));
  });
  lambda->add_option("--graph", o.graph, "Graph JSON")->required();
  lambda->add_option("--method", o.method, "svd or power")->check(CLI::IsMember({"svd", "power"}));
  lambda->add_option("--tol", o.tol, "Power iteration residual tolerance");

  auto* value = sub("value", "Exact game value by exhaustive search", [&](int&) -> Json {
    const Json doc = ctx.game(o.game);
    if (is_concatenated(doc)) {
      const SubgameValue v = concatenated_value(concatenated_from_json(doc), parse_solver(o.solver), ctx.value_options());
      Json out = to_json(v.result);
      out["solver"] = to_string(v.solver_used);
      return out;
    }
    return to_json(game_value(game_from_json(doc), ctx.value_options()));
  });
  value->add_option("--game", o.game, "Game or concatenated game JSON")->required();
  value->add_option("--solver", o.solver, "Concatenated games: auto, brute-force or reduction")
      ->check(CLI::IsMember({"auto", "brute-force", "reduction"}));

  auto* symm = sub("symmetrize", "Symmetrized projection game on (X, X)", [&](int&) -> Json {
    return to_json(symmetrize(game_from_json(ctx.game(o.game))));
  });
  symm->add_option("--game", o.game, "Projection game JSON")->required();

  auto* fort = sub("fortify", "Concatenate a game with two left-regular graphs", [&](int&) -> Json {
    const ConcatenatedGame cg = concatenate(ctx.graph(o.h1), game_from_json(ctx.game(o.game)),
                                            ctx.graph(o.h2));
    return o.materialize ? to_json(cg.derived_game()) : to_json(cg);
  });
  fort->add_option("--game", o.game, "Base game JSON")->required();
  fort->add_option("--h1", o.h1, "Left gadget graph (W, X)")->required();
  fort->add_option("--h2", o.h2, "Right gadget graph (Z, Y)")->required();
  fort->add_flag("--materialize", o.materialize, "Emit the explicit derived game");

  auto* audit = sub("audit", "Robustness audit over large rectangles", [&](int& code) -> Json {
    const Json doc = ctx.game(o.game);
    RectangleMode mode;
    mode.kind = o.trials > 0 ? SubsetMode::Kind::kSampled : SubsetMode::Kind::kExhaustive;
    mode.trials = o.trials;
    mode.seed = ctx.seed;
    mode.jobs = ctx.workers();
    if (ctx.budget) mode.budget = *ctx.budget;
    for (const auto& r : o.rects) mode.candidates.push_back(parse_rectangle(r));
    AuditReport report;
    if (is_concatenated(doc)) {
      const ConcatenatedGame cg = concatenated_from_json(doc);
      if (o.mode == "distance") {
        report = audit_distance(cg, o.delta, o.epsilon, mode);
      } else {
        report = audit_exact(cg, o.delta, o.epsilon, mode, {parse_solver(o.solver), ctx.value_options()});
      }
    } else {
      require(o.mode == "exact", ErrorKind::kInvalidArgument, "distance audits need a concatenated game");
      report = audit_game(game_from_json(doc), o.delta, o.epsilon, mode, ctx.value_options());
    }
    if (report.verdict == Verdict::kViolated) code = kExitViolated;
    return to_json(report);
  });
  audit->add_option("--game", o.game, "Concatenated game (or plain game for exact mode)")->required();
  audit->add_option("--mode", o.mode, "exact or distance")->check(CLI::IsMember({"exact", "distance"}));
  audit->add_option("--delta", o.delta, "Rectangle density threshold")->required();
  audit->add_option("--epsilon", o.epsilon, "Allowed excess")->required();
  audit->add_option("--trials", o.trials, "Sample this many rectangles instead of enumerating");
  audit->add_option("--rect", o.rects, "Candidate rectangle LEFT:RIGHT, e.g. 0-9:0,2,4");
  audit->add_option("--solver", o.solver, "auto, brute-force or reduction")
      ->check(CLI::IsMember({"auto", "brute-force", "reduction"}));

  auto* certify = sub("certify", "Certify extractor or fortifier parameters", [&](int& code) -> Json {
    const BipartiteGraph h = ctx.graph(o.graph);
    if (o.family == "spectral") return to_json(fortifier_from_expander(spectral_lambda(h), o.delta));
    SubsetMode mode = ctx.subset_mode(o.trials);
    for (const auto& s : o.candidates) mode.candidates.push_back(parse_set(s));
    if (o.family == "extractor") {
      auto r = check_extractor(h, o.delta, o.eps1, mode);
      if (std::holds_alternative<Counterexample>(r)) {
        code = kExitViolated;
        return to_json(std::get<Counterexample>(r));
      }
      return to_json(std::get<ExtractorCertificate>(r));
    }
    auto r = check_fortifier(h, o.delta, o.eps1, o.eps2, mode);
    if (std::holds_alternative<Counterexample>(r)) {
      code = kExitViolated;
      return to_json(std::get<Counterexample>(r));
    }
    return to_json(std::get<FortifierCertificate>(r));
  });
  certify->add_option("--graph", o.graph, "Graph JSON")->required();
  certify->add_option("--kind", o.family, "fortifier, extractor or spectral")
      ->check(CLI::IsMember({"fortifier", "extractor", "spectral"}));
  certify->add_option("--delta", o.delta, "Density threshold")->required();
  certify->add_option("--eps1,--eps", o.eps1, "l1 bound");
  certify->add_option("--eps2", o.eps2, "Scaled l2 bound");
  certify->add_option("--trials", o.trials, "Sample this many subsets instead of enumerating");
  certify->add_option("--candidate", o.candidates, "Subset examined first, e.g. 0-9");

  auto* product = sub("product", "Extractor times expander fortifier", [&](int&) -> Json {
    const BipartiteGraph h1 = ctx.graph(o.h1);
    const BipartiteGraph h2 = ctx.graph(o.h2);
    const SubsetMode mode = ctx.subset_mode(o.trials);
    const double measured = scan_deviations(h1, o.delta, mode).worst_l1;
    const auto ext = check_extractor(h1, o.delta, measured, mode);
    require(std::holds_alternative<ExtractorCertificate>(ext), ErrorKind::kInvalidArgument,
            "extractor re-check disagreed with its own scan");
    const ProductFortifier pf =
        product_fortifier(h1, std::get<ExtractorCertificate>(ext), h2, spectral_lambda(h2));
    Json out = to_json(pf.graph);
    out["certificate"] = to_json(pf.certificate);
    return out;
  });
  product->add_option("--h1", o.h1, "Bi-regular extractor (V, W)")->required();
  product->add_option("--h2", o.h2, "Bi-regular expander (W, X)")->required();
  product->add_option("--delta", o.delta, "Density threshold")->required();
  product->add_option("--trials", o.trials, "Sample the extractor check instead of enumerating");

  auto* counter = app.add_subcommand("counterexample", "Negative constructions");
  counter->require_subcommand(1);
  counter->fallthrough();
  auto* skew = sub("skew", "Rewire an extractor so one large set is skewed", [&](int&) -> Json {
    SkewOptions so;
    so.x1 = static_cast<Vertex>(o.x1);
    if (o.trials > 0) so.check = ctx.subset_mode(o.trials);
    const SkewResult r = skew_extractor(ctx.graph(o.graph), parse_set(o.set), o.epsilon, so);
    return {{"graph", to_json(r.graph)}, {"report", to_json(r.report)}};
  }, counter);
  skew->add_option("--graph", o.graph, "Left-regular extractor JSON")->required();
  skew->add_option("--set", o.set, "The set S, e.g. 0-99")->required();
  skew->add_option("--eps", o.epsilon, "Target mass on x1")->required();
  skew->add_option("--x1", o.x1, "Vertex receiving the mass");
  skew->add_option("--trials", o.trials, "Measure extractor parameters with this many sampled subsets");

  auto* lowdeg = sub("lowdeg", "Large set with a skewed distribution in a low-degree graph", [&](int&) -> Json {
    BipartiteGraph h;
    if (!o.graph.empty()) {
      h = ctx.graph(o.graph);
    } else {
      const auto d = static_cast<std::size_t>(1.0 / (o.c * o.epsilon * o.delta));
      h = random_biregular(o.n_left, o.n_right, std::max<std::size_t>(d, 1), ctx.seed);
    }
    const BadSubset bad = find_bad_subset(h, o.delta, o.epsilon, o.c);
    Json out = to_json(bad);
    out["left_degree"] = h.left_degree();
    out["threshold"] = o.epsilon;
    out["exceeds_threshold"] = bad.achieved > o.epsilon;
    return out;
  }, counter);
  lowdeg->add_option("--graph", o.graph, "Left-regular graph (otherwise random with degree 1/(c eps delta))");
  lowdeg->add_option("--delta", o.delta, "Density threshold")->required();
  lowdeg->add_option("--eps", o.epsilon, "Fortifier l2 parameter")->required();
  lowdeg->add_option("--c", o.c, "Degree constant")->required();
  lowdeg->add_option("--n-left", o.n_left, "Generated graph: |W|");
  lowdeg->add_option("--n-right", o.n_right, "Generated graph: |X|");

  auto* repeat = sub("repeat", "Parallel repetition bounds by brute force", [&](int&) -> Json {
    RecursionOptions ro;
    ro.value = ctx.value_options();
    return to_json(verify_recursion(game_from_json(ctx.game(o.game)), o.k, o.delta, o.epsilon, ro));
  });
  repeat->add_option("--game", o.game, "Game JSON")->required();
  repeat->add_option("--k", o.k, "Number of rounds")->required();
  repeat->add_option("--delta", o.delta, "Density threshold")->required();
  repeat->add_option("--epsilon", o.epsilon, "Robustness parameter")->required();

  auto* regular = sub("regularize", "Make a game bi-regular", [&](int&) -> Json {
    BiregularizeOptions bo;
    bo.gadgets.supplier = o.supplier == "random" ? GadgetSupplier::kRandom : GadgetSupplier::kComplete;
    bo.gadgets.seed = ctx.seed;
    if (o.degree > 0) bo.gadgets.degree = o.degree;
    const BiregularizeResult r = biregularize(game_from_json(ctx.game(o.game)), o.epsilon, bo);
    return {{"game", to_json(r.game)}, {"manifest", to_json(r)}};
  });
  regular->add_option("--game", o.game, "Game JSON")->required();
  regular->add_option("--eps", o.epsilon, "Allowed value increase")->required();
  regular->add_option("--supplier", o.supplier, "complete or random")->check(CLI::IsMember({"complete", "random"}));
  regular->add_option("--degree", o.degree, "Random supplier: gadget degree");

  auto* mixing = sub("mixing", "Expander mixing discrepancy", [&](int&) -> Json {
    const BipartiteGraph h = ctx.graph(o.graph);
    const double lam = spectral_lambda(h).lambda;
    if (!o.a.empty() || !o.b.empty()) {
      const double d = mixing_discrepancy(h, parse_set(o.a), parse_set(o.b));
      return {{"discrepancy", d}, {"lambda", lam}, {"within_lambda", d <= lam + 1e-9}};
    }
    const MixingScan scan = scan_mixing(h, o.trials, ctx.seed);
    return {{"max_discrepancy", scan.max_discrepancy},
            {"a", scan.a},
            {"b", scan.b},
            {"pairs", scan.pairs},
            {"exhaustive", scan.exhaustive},
            {"lambda", lam},
            {"within_lambda", scan.max_discrepancy <= lam + 1e-9}};
  });
  mixing->add_option("--graph", o.graph, "Bi-regular graph with |P| = |Q|")->required();
  mixing->add_option("--a", o.a, "Left set");
  mixing->add_option("--b", o.b, "Right set");
  mixing->add_option("--trials", o.trials, "Random set pairs instead of all pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (const char* env = std::getenv(kBudgetEnv)) {
    try {
      ctx.budget = std::stoull(env);
    } catch (const std::logic_error&) {
      std::cerr << "error: " << kBudgetEnv << " must be a non-negative integer\n";
      return 1;
    }
  }

  for (const CLI::App* s : app.get_subcommands()) {
    ctx.command = s->get_name();
    for (const CLI::App* inner : s->get_subcommands()) ctx.command += " " + inner->get_name();
  }
  const auto action = actions.find(ctx.command);
  if (action == actions.end()) {
    std::cerr << "error: unknown command '" << ctx.command << "'\n";
    return 1;
  }
  try {
    int code = 0;
    const auto start = std::chrono::steady_clock::now();
    const Json result = action->second(code);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(ctx, result, seconds);
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace fortify::cli
