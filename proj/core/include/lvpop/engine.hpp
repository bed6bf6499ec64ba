#ifndef LVPOP_ENGINE_HPP
#define LVPOP_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "lvpop/protocol.hpp"
#include "lvpop/rng.hpp"
#include "lvpop/state.hpp"

namespace lvpop {

inline constexpr std::uint64_t kDefaultMaxSteps = 10'000'000'000ULL;  // 1e10 raw steps

enum class Terminal { absorbed, step_limit };

struct RunOutcome {
  Terminal terminal = Terminal::step_limit;
  std::vector<std::int64_t> final_counts;
  std::uint64_t steps = 0;             // raw scheduler steps
  std::uint64_t effective_events = 0;  // state-changing steps
  std::uint64_t seed = 0;              // filled by the caller/harness
};

// One state-changing transition of the aggregate chain and its absolute
// per-raw-step probability.
struct ChangeEvent {
  int initiator;
  int responder;
  int result;
  double prob;
};

// Enumerates every state-changing transition from `state` into `events`
// (cleared first) and returns the total change probability q. O(k^2).
double enumerate_changes(const AggregateState& state, const ValidatedProtocol& vp,
                         PairingMode mode, std::vector<ChangeEvent>& events);

// One raw scheduler step: sample the agent pair, apply the rule. The direct
// path, kept independent of the event-skipping path so the two can be
// checked against each other. No-op on absorbing states.
void step_aggregate(AggregateState& state, const ValidatedProtocol& vp, Rng& rng,
                    PairingMode mode = PairingMode::exact);

// Event-skipping step: draws the geometric number of no-op steps before the
// next state change, then applies a change sampled conditionally on change.
// Identical in distribution to iterating step_aggregate until the state
// moves. Returns the skip count; the step counter advances by skipped + 1.
// Throws AbsorbingState when no change has positive probability.
std::uint64_t step_effective(AggregateState& state, const ValidatedProtocol& vp,
                             Rng& rng, PairingMode mode = PairingMode::exact);

// Trace hook, sampled on raw-step multiples of `stride` (plus step 0), so
// traces are time-comparable across pairing modes.
struct Recorder {
  std::uint64_t stride = 1;
  std::function<void(std::uint64_t step, const std::vector<std::int64_t>& counts)> sink;
};

RunOutcome run_to_absorption(AggregateState state, const ValidatedProtocol& vp,
                             Rng& rng, std::uint64_t max_steps = kDefaultMaxSteps,
                             const Recorder* recorder = nullptr,
                             PairingMode mode = PairingMode::exact);

// One edge-uniform, orientation-uniform step on an explicit graph. Returns
// true when the responder changed type.
bool step_graph(GraphState& state, const ValidatedProtocol& vp, Rng& rng);

RunOutcome run_graph_to_absorption(GraphState state, const ValidatedProtocol& vp,
                                   Rng& rng, std::uint64_t max_steps = kDefaultMaxSteps,
                                   const Recorder* recorder = nullptr);

// One step of the star chain for RPS (throws NotRps otherwise). With the hub
// of type c and n leaves: nothing happens w.p. n_c/n, one leaf of the prey
// type joins the hub's species w.p. n_{c+1}/n, and the hub is converted by a
// predator leaf w.p. n_{c+2}/n. Returns true when the state changed.
bool step_star(StarState& state, const ValidatedProtocol& vp, Rng& rng);

// Inner loop variant of step_star: caller has already checked is_rps and
// n >= 1, so nothing is revalidated per step.
inline bool step_star_prechecked(StarState& state, Rng& rng) {
  state.step += 1;
  const int c = state.center;
  const int prey = (c + 1) % 3;
  std::int64_t r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(state.n)));
  if (r < state.leaf_counts[c]) return false;
  if (r < state.leaf_counts[c] + state.leaf_counts[prey]) {
    state.leaf_counts[prey] -= 1;
    state.leaf_counts[c] += 1;
    return true;
  }
  state.center = (c + 2) % 3;  // a predator leaf converts the hub
  return true;
}

struct StarRunOutcome {
  Terminal terminal = Terminal::step_limit;
  StarState final_state;
  std::uint64_t steps = 0;
  std::uint64_t effective_events = 0;
};

StarRunOutcome run_star_to_absorption(StarState state, const ValidatedProtocol& vp,
                                      Rng& rng, std::uint64_t max_steps = kDefaultMaxSteps,
                                      const Recorder* recorder = nullptr);

}  // namespace lvpop

#endif
