#include "lvpop/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>

namespace lvpop {

namespace {

int resolve_label(const nlohmann::json& j, const std::map<std::string, int>& index) {
  std::string label = j.get<std::string>();
  auto it = index.find(label);
  if (it == index.end())
    throw Error(Errc::BadProtocolFile, "unknown species label '" + label + "'");
  return it->second;
}

}  // namespace

ProtocolSpec protocol_from_json(const nlohmann::json& j) {
  ProtocolSpec spec;
  try {
    spec.k = j.at("k").get<int>();
    if (j.contains("names")) spec.names = j.at("names").get<std::vector<std::string>>();
    std::string kind = j.value("kind", "lv");
    if (kind == "lv") spec.kind = Kind::lv;
    else if (kind == "general") spec.kind = Kind::general;
    else throw Error(Errc::BadProtocolFile, "kind must be 'lv' or 'general'");

    if (spec.names.empty()) {
      for (int i = 0; i < spec.k; ++i) spec.names.push_back("t" + std::to_string(i));
    }
    if (static_cast<int>(spec.names.size()) != spec.k)
      throw Error(Errc::BadProtocolFile, "names size differs from k");
    std::map<std::string, int> index;
    for (int i = 0; i < spec.k; ++i) {
      if (!index.emplace(spec.names[i], i).second)
        throw Error(Errc::BadProtocolFile, "duplicate species label '" + spec.names[i] + "'");
    }

    if (spec.kind == Kind::lv) {
      spec.matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
    } else {
      for (const auto& r : j.at("rules")) {
        Rule rule;
        rule.initiator = resolve_label(r.at("initiator"), index);
        rule.responder = resolve_label(r.at("responder"), index);
        rule.result = resolve_label(r.at("result"), index);
        rule.prob = r.at("prob").get<double>();
        spec.rules.push_back(rule);
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadProtocolFile, e.what());
  }

  auto violations = check(spec);
  if (!violations.empty())
    throw Error(violations.front().code, violations.front().detail);
  return spec;
}

nlohmann::json protocol_to_json(const ProtocolSpec& spec) {
  nlohmann::json j;
  j["k"] = spec.k;
  j["names"] = spec.names;
  if (spec.kind == Kind::lv) {
    j["kind"] = "lv";
    j["matrix"] = spec.matrix;
  } else {
    j["kind"] = "general";
    auto rules = nlohmann::json::array();
    for (const Rule& r : spec.rules) {
      rules.push_back({{"initiator", spec.names[r.initiator]},
                       {"responder", spec.names[r.responder]},
                       {"result", spec.names[r.result]},
                       {"prob", r.prob}});
    }
    j["rules"] = rules;
  }
  return j;
}

ProtocolSpec load_protocol_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadProtocolFile, std::string(e.what()) + " in " + path);
  }
  return protocol_from_json(j);
}

void save_protocol_file(const ProtocolSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path);
  out << protocol_to_json(spec).dump(2) << "\n";
}

Graph graph_from_json(const nlohmann::json& j) {
  Graph g;
  try {
    g.node_count = j.at("n").get<std::int64_t>();
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (const auto& e : j.at("edges")) {
      auto u = e.at(0).get<std::int32_t>();
      auto v = e.at(1).get<std::int32_t>();
      if (u == v) throw Error(Errc::BadGraphFile, "self-loop on node " + std::to_string(u));
      if (u < 0 || v < 0 || u >= g.node_count || v >= g.node_count)
        throw Error(Errc::BadGraphFile, "edge endpoint out of range");
      auto key = std::minmax(u, v);
      if (!seen.insert({key.first, key.second}).second)
        throw Error(Errc::BadGraphFile, "duplicate edge");
      g.edges.emplace_back(u, v);
    }
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadGraphFile, e.what());
  }
  if (!is_connected(g)) throw Error(Errc::BadGraphFile, "graph is not connected");
  return g;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadGraphFile, std::string(e.what()) + " in " + path);
  }
  return graph_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["protocol"] = protocol_to_json(config.protocol);
  j["init"] = config.init_counts;
  switch (config.graph) {
    case GraphKind::complete: j["graph"] = "complete"; break;
    case GraphKind::star: j["graph"] = "star"; break;
    case GraphKind::custom: {
      j["graph"] = "custom";
      auto edges = nlohmann::json::array();
      for (auto [u, v] : config.custom_graph.edges) edges.push_back({u, v});
      j["graph_nodes"] = config.custom_graph.node_count;
      j["graph_edges"] = edges;
      break;
    }
  }
  if (config.graph == GraphKind::star) j["star_center"] = config.star_center;
  j["trials"] = config.trials;
  j["base_seed"] = config.base_seed;
  j["max_steps"] = config.max_steps;
  j["pairing"] = config.pairing == PairingMode::exact ? "exact" : "paper";
  return j;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace lvpop
