#include "lvpop/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace lvpop {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NonZeroDiagonal: return "NonZeroDiagonal";
    case Errc::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case Errc::IsolatedType: return "IsolatedType";
    case Errc::DuplicateRule: return "DuplicateRule";
    case Errc::UnknownBuiltin: return "UnknownBuiltin";
    case Errc::NotLvKind: return "NotLvKind";
    case Errc::NotRps: return "NotRps";
    case Errc::ZeroPopulation: return "ZeroPopulation";
    case Errc::EmptyPopulation: return "EmptyPopulation";
    case Errc::AbsorbingState: return "AbsorbingState";
    case Errc::LpInfeasible: return "LpInfeasible";
    case Errc::NumericallyIllConditioned: return "NumericallyIllConditioned";
    case Errc::StepSizeTooLarge: return "StepSizeTooLarge";
    case Errc::FixedPoint: return "FixedPoint";
    case Errc::NoReturnWithinBound: return "NoReturnWithinBound";
    case Errc::UnabsorbedTrials: return "UnabsorbedTrials";
    case Errc::BadProtocolFile: return "BadProtocolFile";
    case Errc::BadGraphFile: return "BadGraphFile";
    case Errc::BadConfig: return "BadConfig";
    case Errc::IoFailure: return "IoFailure";
  }
  return "UnknownError";
}

namespace {

std::string default_name(int i) { return "t" + std::to_string(i); }

// Rule view of the protocol regardless of kind; LV matrices expand to
// (i, j) -> i rules.
std::vector<Rule> as_rules(const ProtocolSpec& spec) {
  if (spec.kind == Kind::general) return spec.rules;
  std::vector<Rule> rules;
  for (int i = 0; i < spec.k; ++i)
    for (int j = 0; j < spec.k; ++j)
      if (spec.matrix[i][j] > 0.0) rules.push_back({i, j, i, spec.matrix[i][j]});
  return rules;
}

}  // namespace

std::vector<Violation> check(const ProtocolSpec& spec) {
  std::vector<Violation> out;
  if (spec.k < 2) {
    out.push_back({Errc::BadProtocolFile, "need at least 2 species"});
    return out;
  }
  if (!spec.names.empty() && static_cast<int>(spec.names.size()) != spec.k)
    out.push_back({Errc::BadProtocolFile, "names size differs from k"});

  if (spec.kind == Kind::lv) {
    if (static_cast<int>(spec.matrix.size()) != spec.k ||
        std::any_of(spec.matrix.begin(), spec.matrix.end(), [&](const auto& row) {
          return static_cast<int>(row.size()) != spec.k;
        })) {
      out.push_back({Errc::BadProtocolFile, "matrix is not k x k"});
      return out;
    }
    for (int i = 0; i < spec.k; ++i) {
      if (spec.matrix[i][i] != 0.0) {
        std::ostringstream os;
        os << "P[" << i << "][" << i << "] = " << spec.matrix[i][i];
        out.push_back({Errc::NonZeroDiagonal, os.str()});
      }
      for (int j = 0; j < spec.k; ++j) {
        double p = spec.matrix[i][j];
        if (!(p >= 0.0 && p <= 1.0) || std::isnan(p)) {
          std::ostringstream os;
          os << "P[" << i << "][" << j << "] = " << p;
          out.push_back({Errc::ProbabilityOutOfRange, os.str()});
        }
      }
    }
  } else {
    std::set<std::tuple<int, int, int>> seen;
    std::map<std::pair<int, int>, double> pair_mass;
    for (const Rule& r : spec.rules) {
      if (r.initiator < 0 || r.initiator >= spec.k || r.responder < 0 ||
          r.responder >= spec.k || r.result < 0 || r.result >= spec.k) {
        out.push_back({Errc::BadProtocolFile, "rule species index out of range"});
        continue;
      }
      if (!(r.prob >= 0.0 && r.prob <= 1.0) || std::isnan(r.prob)) {
        std::ostringstream os;
        os << "rule (" << r.initiator << "," << r.responder << ")->" << r.result
           << " prob " << r.prob;
        out.push_back({Errc::ProbabilityOutOfRange, os.str()});
      }
      if (!seen.insert({r.initiator, r.responder, r.result}).second) {
        std::ostringstream os;
        os << "(" << r.initiator << "," << r.responder << ")->" << r.result;
        out.push_back({Errc::DuplicateRule, os.str()});
      }
      pair_mass[{r.initiator, r.responder}] += r.prob;
    }
    for (const auto& [pair, mass] : pair_mass) {
      if (mass > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "pair (" << pair.first << "," << pair.second << ") mass " << mass;
        out.push_back({Errc::ProbabilityOutOfRange, os.str()});
      }
    }
  }

  // "Every type interacts": type i must occur in some positive-probability
  // state-changing rule, as initiator or responder.
  std::vector<bool> interacts(spec.k, false);
  for (const Rule& r : as_rules(spec)) {
    if (r.prob > 0.0 && r.result != r.responder) {
      interacts[r.initiator] = true;
      interacts[r.responder] = true;
    }
  }
  for (int i = 0; i < spec.k; ++i) {
    if (!interacts[i]) {
      std::string label = spec.names.empty() ? default_name(i) : spec.names[i];
      out.push_back({Errc::IsolatedType, "type " + label + " never interacts"});
    }
  }
  return out;
}

ValidatedProtocol validate(ProtocolSpec spec) {
  auto violations = check(spec);
  if (!violations.empty())
    throw Error(violations.front().code, violations.front().detail);

  if (spec.names.empty()) {
    spec.names.reserve(spec.k);
    for (int i = 0; i < spec.k; ++i) spec.names.push_back(default_name(i));
  }

  ValidatedProtocol vp;
  vp.spec_ = std::move(spec);
  const ProtocolSpec& s = vp.spec_;

  vp.outcomes_.assign(static_cast<std::size_t>(s.k) * s.k, {});
  vp.change_prob_.assign(static_cast<std::size_t>(s.k) * s.k, 0.0);
  double p_min = 0.0;
  for (const Rule& r : as_rules(s)) {
    if (r.prob <= 0.0) continue;
    std::size_t slot = static_cast<std::size_t>(r.initiator) * s.k + r.responder;
    vp.outcomes_[slot].push_back({r.result, r.prob});
    if (r.result != r.responder) vp.change_prob_[slot] += r.prob;
    if (p_min == 0.0 || r.prob < p_min) p_min = r.prob;
  }
  vp.p_min_ = p_min;

  // D(P): arcs where the initiator can actually change the responder.
  Digraph d;
  d.k = s.k;
  for (int i = 0; i < s.k; ++i)
    for (int j = 0; j < s.k; ++j)
      if (vp.change_prob_[static_cast<std::size_t>(i) * s.k + j] > 0.0) {
        d.arcs.emplace_back(i, j);
        vp.active_pairs_.push_back({i, j});
      }

  // Weak components by union-find.
  std::vector<int> parent(s.k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [i, j] : d.arcs) parent[find(i)] = find(j);
  d.component.resize(s.k);
  std::map<int, int> relabel;
  for (int i = 0; i < s.k; ++i) {
    int root = find(i);
    auto [it, _] = relabel.try_emplace(root, static_cast<int>(relabel.size()));
    d.component[i] = it->second;
  }
  d.weakly_connected = relabel.size() == 1;
  vp.digraph_ = std::move(d);
  return vp;
}

IrreducibilityReport is_irreducible(const ValidatedProtocol& vp) {
  if (vp.kind() != Kind::lv) throw Error(Errc::NotLvKind, "irreducibility is defined for LV protocols");
  const auto& P = vp.spec().matrix;
  for (int j = 0; j < vp.k(); ++j) {
    bool has_predator = false;
    for (int i = 0; i < vp.k(); ++i)
      if (P[i][j] > 0.0) { has_predator = true; break; }
    if (!has_predator) {
      return {false, "column " + vp.names()[j] + " is all-zero (type has no predator)"};
    }
  }
  if (!vp.digraph().weakly_connected) {
    std::ostringstream os;
    os << "digraph splits into components:";
    int ncomp = *std::max_element(vp.digraph().component.begin(),
                                  vp.digraph().component.end()) + 1;
    for (int c = 0; c < ncomp; ++c) {
      os << " {";
      bool first = true;
      for (int i = 0; i < vp.k(); ++i)
        if (vp.digraph().component[i] == c) {
          os << (first ? "" : ",") << vp.names()[i];
          first = false;
        }
      os << "}";
    }
    return {false, os.str()};
  }
  return {true, ""};
}

namespace {

bool pair_is_frozen(const ValidatedProtocol& vp, int i, int j) {
  return vp.change_prob(i, j) == 0.0;
}

}  // namespace

bool is_absorbing(const AggregateState& state, const ValidatedProtocol& vp) {
  const int k = vp.k();
  for (int i = 0; i < k; ++i) {
    if (state.counts[i] <= 0) continue;
    for (int j = 0; j < k; ++j) {
      std::int64_t avail = state.counts[j] - (i == j ? 1 : 0);
      if (avail <= 0) continue;
      if (!pair_is_frozen(vp, i, j)) return false;
    }
  }
  return true;
}

bool is_absorbing(const GraphState& state, const ValidatedProtocol& vp) {
  for (auto [u, v] : state.graph.edges) {
    int a = state.species[u], b = state.species[v];
    if (!pair_is_frozen(vp, a, b) || !pair_is_frozen(vp, b, a)) return false;
  }
  return true;
}

bool is_absorbing(const StarState& state, const ValidatedProtocol& vp) {
  for (int j = 0; j < vp.k(); ++j) {
    if (state.leaf_counts[j] <= 0) continue;
    if (!pair_is_frozen(vp, state.center, j) || !pair_is_frozen(vp, j, state.center))
      return false;
  }
  return true;
}

bool is_rps(const ValidatedProtocol& vp) {
  if (vp.kind() != Kind::lv || vp.k() != 3) return false;
  const auto& P = vp.spec().matrix;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double want = (j == (i + 1) % 3) ? 1.0 : 0.0;
      if (P[i][j] != want) return false;
    }
  return true;
}

ProtocolSpec builtin(const std::string& name) {
  if (name == "rps") {
    ProtocolSpec s;
    s.k = 3;
    s.names = {"1", "2", "3"};
    s.kind = Kind::lv;
    s.matrix = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    return s;
  }
  if (name == "ws") {
    ProtocolSpec s;
    s.k = 4;
    s.names = {"X", "Y", "x", "y"};
    s.kind = Kind::lv;
    s.matrix = {{0, 1, 1, 0.5},
                {1, 0, 0.5, 1},
                {0, 0, 0, 0},
                {0, 0, 0, 0}};
    return s;
  }
  if (name == "life_death") return builtin_life_death(1.0, 1.0);
  if (name == "counterexample") {
    // Non-LV 3-species protocol {ab->ac, ac->aa, ca->cb, ba->bb, bb->ba},
    // all transitions with probability 1.
    ProtocolSpec s;
    s.k = 3;
    s.names = {"a", "b", "c"};
    s.kind = Kind::general;
    const int a = 0, b = 1, c = 2;
    s.rules = {{a, b, c, 1.0},
               {a, c, a, 1.0},
               {c, a, b, 1.0},
               {b, a, b, 1.0},
               {b, b, a, 1.0}};
    return s;
  }
  throw Error(Errc::UnknownBuiltin, name);
}

ProtocolSpec builtin_life_death(double p12, double p21) {
  ProtocolSpec s;
  s.k = 2;
  s.names = {"1", "2"};
  s.kind = Kind::lv;
  s.matrix = {{0, p12}, {p21, 0}};
  return s;
}

std::vector<std::string> builtin_names() {
  return {"rps", "ws", "life_death", "counterexample"};
}

Graph complete_graph(std::int64_t n) {
  Graph g;
  g.node_count = n;
  for (std::int32_t u = 0; u < n; ++u)
    for (std::int32_t v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  return g;
}

Graph star_graph(std::int64_t leaves) {
  Graph g;
  g.node_count = leaves + 1;
  for (std::int32_t v = 1; v <= leaves; ++v) g.edges.emplace_back(0, v);
  return g;
}

bool is_connected(const Graph& g) {
  if (g.node_count <= 1) return true;
  std::vector<int> parent(g.node_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::int64_t merges = 0;
  for (auto [u, v] : g.edges) {
    int ru = find(u), rv = find(v);
    if (ru != rv) { parent[ru] = rv; ++merges; }
  }
  return merges == g.node_count - 1;
}

GraphState GraphState::from_species(Graph g, std::vector<std::int32_t> sp, int k) {
  GraphState s;
  s.counts.assign(k, 0);
  for (auto t : sp) s.counts[t] += 1;
  s.graph = std::move(g);
  s.species = std::move(sp);
  return s;
}

}  // namespace lvpop
