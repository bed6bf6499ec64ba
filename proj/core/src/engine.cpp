#include "lvpop/engine.hpp"

#include <cassert>
#include <cmath>

namespace lvpop {

namespace {

// Samples a species index from counts, where `total` is their sum and
// `exclude` (if >= 0) removes one agent of that species from the pool.
int sample_species(const std::vector<std::int64_t>& counts, std::int64_t total,
                   int exclude, Rng& rng) {
  std::int64_t r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::int64_t c = counts[i] - (static_cast<int>(i) == exclude ? 1 : 0);
    if (r < c) return static_cast<int>(i);
    r -= c;
  }
  return static_cast<int>(counts.size()) - 1;  // unreachable for consistent counts
}

void apply_change(AggregateState& state, int responder, int result) {
  state.counts[responder] -= 1;
  state.counts[result] += 1;
  assert(state.counts[responder] >= 0);
}

const ChangeEvent& sample_change(const std::vector<ChangeEvent>& events, double q,
                                 Rng& rng) {
  double target = rng.uniform() * q;
  double acc = 0.0;
  for (const auto& ev : events) {
    acc += ev.prob;
    if (target < acc) return ev;
  }
  return events.back();  // guards accumulated rounding
}

void emit_range(const Recorder* rec, const std::vector<std::int64_t>& counts,
                std::uint64_t after, std::uint64_t upto) {
  if (!rec || !rec->sink || rec->stride == 0) return;
  std::uint64_t first = (after / rec->stride + 1) * rec->stride;
  for (std::uint64_t p = first; p <= upto; p += rec->stride) rec->sink(p, counts);
}

}  // namespace

double enumerate_changes(const AggregateState& state, const ValidatedProtocol& vp,
                         PairingMode mode, std::vector<ChangeEvent>& events) {
  events.clear();
  const double n = static_cast<double>(state.n);
  if (state.n <= 0) throw Error(Errc::EmptyPopulation);
  const double inv_denom =
      1.0 / ((mode == PairingMode::paper) ? n * n : n * (n - 1.0));
  double q = 0.0;
  for (const auto& pair : vp.active_pairs()) {
    const std::int64_t ni = state.counts[pair.initiator];
    if (ni <= 0) continue;
    // Both modes need two distinct agents for a rule to fire; they differ
    // in whether the initiator's slot stays in the responder denominator.
    const std::int64_t nj =
        state.counts[pair.responder] - (pair.initiator == pair.responder ? 1 : 0);
    if (nj <= 0) continue;
    const double w = static_cast<double>(ni) * static_cast<double>(nj) * inv_denom;
    for (const auto& o : vp.outcomes(pair.initiator, pair.responder)) {
      if (o.result == pair.responder || o.prob <= 0.0) continue;
      events.push_back({pair.initiator, pair.responder, o.result, w * o.prob});
      q += w * o.prob;
    }
  }
  return q;
}

void step_aggregate(AggregateState& state, const ValidatedProtocol& vp, Rng& rng,
                    PairingMode mode) {
  if (state.n <= 0) throw Error(Errc::EmptyPopulation);
  state.step += 1;
  if (state.n == 1) return;  // a lone agent has no interaction partner

  const int i = sample_species(state.counts, state.n, -1, rng);
  int j;
  if (mode == PairingMode::exact) {
    j = sample_species(state.counts, state.n - 1, i, rng);
  } else {
    // Independent draw over all n agents; landing on the initiator itself
    // (probability 1/n_i given the same species) is a forced no-op. This
    // realizes the n_i n_j / n^2 ordered-pair weights of paper mode.
    j = sample_species(state.counts, state.n, -1, rng);
    if (j == i && rng.below(static_cast<std::uint64_t>(state.counts[i])) == 0) return;
  }

  const auto& outs = vp.outcomes(i, j);
  if (outs.empty()) return;
  double roll = rng.uniform();
  double acc = 0.0;
  for (const auto& o : outs) {
    acc += o.prob;
    if (roll < acc) {
      if (o.result != j) apply_change(state, j, o.result);
      return;
    }
  }
}

std::uint64_t step_effective(AggregateState& state, const ValidatedProtocol& vp,
                             Rng& rng, PairingMode mode) {
  std::vector<ChangeEvent> scratch;
  double q = enumerate_changes(state, vp, mode, scratch);
  if (q <= 0.0)
    throw Error(Errc::AbsorbingState, "no state-changing interaction has positive probability");
  std::uint64_t cap = (~std::uint64_t{0} - state.step) / 2;
  std::uint64_t skipped = rng.geometric_skips(q, cap);
  const ChangeEvent& ev = sample_change(scratch, q, rng);
  apply_change(state, ev.responder, ev.result);
  state.step += skipped + 1;
  return skipped;
}

RunOutcome run_to_absorption(AggregateState state, const ValidatedProtocol& vp,
                             Rng& rng, std::uint64_t max_steps,
                             const Recorder* recorder, PairingMode mode) {
  RunOutcome out;
  std::vector<ChangeEvent> scratch;
  if (recorder && recorder->sink && state.step == 0) recorder->sink(0, state.counts);

  for (;;) {
    double q = enumerate_changes(state, vp, mode, scratch);
    if (q <= 0.0) {
      out.terminal = Terminal::absorbed;
      break;
    }
    std::uint64_t cap = state.step < max_steps ? max_steps - state.step : 0;
    std::uint64_t skipped = rng.geometric_skips(q, cap);
    std::uint64_t event_step = state.step + skipped + 1;
    if (event_step > max_steps) {
      emit_range(recorder, state.counts, state.step, max_steps);
      state.step = max_steps;
      out.terminal = Terminal::step_limit;
      break;
    }
    emit_range(recorder, state.counts, state.step, event_step - 1);
    const ChangeEvent& ev = sample_change(scratch, q, rng);
    apply_change(state, ev.responder, ev.result);
    state.step = event_step;
    out.effective_events += 1;
    emit_range(recorder, state.counts, event_step - 1, event_step);
  }
  out.final_counts = std::move(state.counts);
  out.steps = state.step;
  return out;
}

bool step_graph(GraphState& state, const ValidatedProtocol& vp, Rng& rng) {
  const std::uint64_t m = state.graph.edges.size();
  if (m == 0) throw Error(Errc::EmptyPopulation, "graph has no edges");
  std::uint64_t pick = rng.below(2 * m);
  auto [a, b] = state.graph.edges[pick >> 1];
  std::int32_t u = (pick & 1) ? b : a;   // initiator
  std::int32_t v = (pick & 1) ? a : b;   // responder
  state.step += 1;

  const auto& outs = vp.outcomes(state.species[u], state.species[v]);
  if (outs.empty()) return false;
  double roll = rng.uniform();
  double acc = 0.0;
  for (const auto& o : outs) {
    acc += o.prob;
    if (roll < acc) {
      if (o.result == state.species[v]) return false;
      state.counts[state.species[v]] -= 1;
      state.counts[o.result] += 1;
      state.species[v] = o.result;
      return true;
    }
  }
  return false;
}

RunOutcome run_graph_to_absorption(GraphState state, const ValidatedProtocol& vp,
                                   Rng& rng, std::uint64_t max_steps,
                                   const Recorder* recorder) {
  RunOutcome out;
  if (recorder && recorder->sink && state.step == 0) recorder->sink(0, state.counts);
  // Absorption can only begin at a state change, so the O(E) predicate runs
  // once up front and afterwards only when something changed.
  bool absorbed = is_absorbing(state, vp);
  std::uint64_t last = state.step;
  while (!absorbed && state.step < max_steps) {
    bool changed = step_graph(state, vp, rng);
    emit_range(recorder, state.counts, last, state.step);
    last = state.step;
    if (changed) {
      out.effective_events += 1;
      absorbed = is_absorbing(state, vp);
    }
  }
  out.terminal = absorbed ? Terminal::absorbed : Terminal::step_limit;
  out.final_counts = state.counts;
  out.steps = state.step;
  return out;
}

namespace {

void require_star_preconditions(const StarState& state, const ValidatedProtocol& vp) {
  if (!is_rps(vp))
    throw Error(Errc::NotRps, "the star specialization covers the RPS protocol");
  if (state.n <= 0) throw Error(Errc::EmptyPopulation, "star has no leaves");
}

}  // namespace

bool step_star(StarState& state, const ValidatedProtocol& vp, Rng& rng) {
  require_star_preconditions(state, vp);
  return step_star_prechecked(state, rng);
}

StarRunOutcome run_star_to_absorption(StarState state, const ValidatedProtocol& vp,
                                      Rng& rng, std::uint64_t max_steps,
                                      const Recorder* recorder) {
  require_star_preconditions(state, vp);
  StarRunOutcome out;
  if (recorder && recorder->sink && state.step == 0) recorder->sink(0, state.leaf_counts);
  std::uint64_t last = state.step;
  // RPS on a star absorbs exactly when every leaf matches the hub.
  while (state.leaf_counts[state.center] != state.n && state.step < max_steps) {
    if (step_star_prechecked(state, rng)) out.effective_events += 1;
    emit_range(recorder, state.leaf_counts, last, state.step);
    last = state.step;
  }
  out.terminal = state.leaf_counts[state.center] == state.n ? Terminal::absorbed
                                                            : Terminal::step_limit;
  out.steps = state.step;
  out.final_state = std::move(state);
  return out;
}

}  // namespace lvpop
