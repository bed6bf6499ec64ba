#ifndef LVPOP_PROTOCOL_HPP
#define LVPOP_PROTOCOL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lvpop/errors.hpp"
#include "lvpop/state.hpp"

namespace lvpop {

enum class Kind { lv, general };

// One pairwise rule: when an initiator of type `initiator` meets a responder
// of type `responder`, the responder becomes `result` with probability `prob`.
// The initiator never changes. Probabilities over a fixed (initiator,
// responder) pair may sum to less than 1; the residual mass leaves the
// responder unchanged.
struct Rule {
  int initiator = 0;
  int responder = 0;
  int result = 0;
  double prob = 0.0;
};

struct ProtocolSpec {
  int k = 0;
  std::vector<std::string> names;
  Kind kind = Kind::lv;
  std::vector<std::vector<double>> matrix;  // lv: k x k, P[i][j], zero diagonal
  std::vector<Rule> rules;                  // general kind only
};

struct Digraph {
  int k = 0;
  std::vector<std::pair<int, int>> arcs;  // (i,j) iff P[i][j] > 0
  bool weakly_connected = false;
  std::vector<int> component;  // weak-component id per type
};

struct Violation {
  Errc code;
  std::string detail;
};

// Structural validation; empty result means the protocol is well formed.
std::vector<Violation> check(const ProtocolSpec& spec);

// Immutable validated protocol: the input definition plus derived structure and the
// per-ordered-pair rule table the engines run on. Safe to share across
// concurrent trial workers.
class ValidatedProtocol {
 public:
  struct Outcome {
    int result;
    double prob;
  };

  int k() const { return spec_.k; }
  Kind kind() const { return spec_.kind; }
  const ProtocolSpec& spec() const { return spec_; }
  const std::vector<std::string>& names() const { return spec_.names; }
  const Digraph& digraph() const { return digraph_; }
  double p_min() const { return p_min_; }

  // Rules for ordered species pair (i, j); results equal to j are no-ops.
  const std::vector<Outcome>& outcomes(int i, int j) const {
    return outcomes_[static_cast<std::size_t>(i) * spec_.k + j];
  }
  // Probability that the responder actually changes type in an (i, j) meeting.
  double change_prob(int i, int j) const {
    return change_prob_[static_cast<std::size_t>(i) * spec_.k + j];
  }

  // Ordered pairs that can change the responder, for hot-loop enumeration.
  struct ActivePair {
    std::int32_t initiator;
    std::int32_t responder;
  };
  const std::vector<ActivePair>& active_pairs() const { return active_pairs_; }

  friend ValidatedProtocol validate(ProtocolSpec spec);

 private:
  ProtocolSpec spec_;
  Digraph digraph_;
  double p_min_ = 0.0;
  std::vector<std::vector<Outcome>> outcomes_;  // k*k slots
  std::vector<double> change_prob_;
  std::vector<ActivePair> active_pairs_;
};

// Validates and derives; throws Error with the first violation's code.
// Validating an already-validated spec is idempotent.
ValidatedProtocol validate(ProtocolSpec spec);

// Built-in protocols.
//   rps            3 species, P_12 = P_23 = P_31 = 1
//   ws             4 species X,Y,x,y; wolves convert sheep, matched-case w.p. 1
//   life_death     2 species; default fair (P_12 = P_21 = 1)
//   counterexample 3-species general-kind protocol with exponential stalling
ProtocolSpec builtin(const std::string& name);
ProtocolSpec builtin_life_death(double p12, double p21);
std::vector<std::string> builtin_names();

struct IrreducibilityReport {
  bool irreducible = false;
  std::string reason;  // names the failing column or the split components
};

// LV-only: no all-zero column in P and D(P) weakly connected.
IrreducibilityReport is_irreducible(const ValidatedProtocol& vp);

// A state is absorbing when no scheduled interaction can change it.
bool is_absorbing(const AggregateState& state, const ValidatedProtocol& vp);
bool is_absorbing(const GraphState& state, const ValidatedProtocol& vp);
bool is_absorbing(const StarState& state, const ValidatedProtocol& vp);

// True when vp is exactly the cyclic 3-species RPS protocol.
bool is_rps(const ValidatedProtocol& vp);

}  // namespace lvpop

#endif
