#ifndef LVPOP_IO_HPP
#define LVPOP_IO_HPP

#include <string>

#include "json.hpp"
#include "lvpop/experiments.hpp"
#include "lvpop/protocol.hpp"

namespace lvpop {

// Protocol file schema:
//   {"k":3, "names":["R","P","S"], "kind":"lv", "matrix":[[0,1,0],[0,0,1],[1,0,0]]}
//   {"k":3, "names":["a","b","c"], "kind":"general",
//    "rules":[{"initiator":"a","responder":"b","result":"c","prob":1.0}]}
// Rule species are written as labels and resolved against `names`.
// Files violating the structural invariants are rejected with the matching
// validation error (NonZeroDiagonal, ProbabilityOutOfRange, IsolatedType,
// DuplicateRule); malformed JSON raises BadProtocolFile.
ProtocolSpec protocol_from_json(const nlohmann::json& j);
nlohmann::json protocol_to_json(const ProtocolSpec& spec);
ProtocolSpec load_protocol_file(const std::string& path);
void save_protocol_file(const ProtocolSpec& spec, const std::string& path);

// Graph file schema: {"n": 4, "edges": [[0,1],[1,2],[2,3]]}. The graph must
// be connected and simple.
Graph graph_from_json(const nlohmann::json& j);
Graph load_graph_file(const std::string& path);

nlohmann::json config_to_json(const ExperimentConfig& config);

// Shortest decimal form that re-parses to the same double (std::to_chars).
std::string format_double(double v);

}  // namespace lvpop

#endif
