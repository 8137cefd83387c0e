#pragma once

#include <string>

#include <json.hpp>

#include "fortify/adversarial.hpp"
#include "fortify/concat.hpp"
#include "fortify/fortifier.hpp"
#include "fortify/game.hpp"
#include "fortify/graph.hpp"
#include "fortify/regularize.hpp"
#include "fortify/repetition.hpp"
#include "fortify/spectral.hpp"

namespace fortify {

using Json = nlohmann::json;

const char* version();

Json to_json(const BipartiteGraph& h);
BipartiteGraph graph_from_json(const Json& j);

/// Keys n_left, n_right, sigma_x, sigma_y, edges, relations and, for
/// projection games, projection. Input may give projection instead of
/// relations.
Json to_json(const Game& g);
Game game_from_json(const Json& j);

/// {"base": game, "h1": graph, "h2": graph}
Json to_json(const ConcatenatedGame& cg);
ConcatenatedGame concatenated_from_json(const Json& j);

Json to_json(const Ratio& r);
Json to_json(const ValueResult& v);
Json to_json(const ExpanderCertificate& c);
Json to_json(const FortifierCertificate& c);
Json to_json(const ExtractorCertificate& c);
Json to_json(const Counterexample& c);
Json to_json(const DeviationScan& s);
Json to_json(const AuditReport& r);
Json to_json(const DeviationBound& b);
Json to_json(const SkewReport& r);
Json to_json(const BadSubset& b);
Json to_json(const PartitionAccounting& p);
Json to_json(const RepetitionReport& r);
Json to_json(const GadgetPlan& p);
/// Transformation manifest of biregularize (without the output game).
Json to_json(const BiregularizeResult& r);

std::string to_string(CertificateMode m);
std::string to_string(LambdaMethod m);
std::string to_string(AuditMode m);

Json read_json_file(const std::string& path);
/// Canonical form: sorted keys, two-space indent, trailing newline.
std::string dump_canonical(const Json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fortify
