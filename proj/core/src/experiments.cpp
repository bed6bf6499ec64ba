#include "lvpop/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "lvpop/calibration.hpp"
#include "lvpop/io.hpp"

namespace lvpop {

std::int64_t ExperimentConfig::population() const {
  return std::accumulate(init_counts.begin(), init_counts.end(), std::int64_t{0});
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return fnv1a64(config_to_json(config).dump());
}

namespace {

// Deterministic node layout for per-agent runs: species blocks in index
// order; on a star node 0 is the hub and carries `center`.
std::vector<std::int32_t> block_species(const std::vector<std::int64_t>& counts) {
  std::vector<std::int32_t> sp;
  for (std::size_t s = 0; s < counts.size(); ++s)
    sp.insert(sp.end(), static_cast<std::size_t>(counts[s]), static_cast<std::int32_t>(s));
  return sp;
}

std::string outcome_key(const ValidatedProtocol& vp, const TrialRecord& rec) {
  if (rec.terminal == Terminal::step_limit) return "step_limit";
  std::int64_t n = std::accumulate(rec.final_counts.begin(), rec.final_counts.end(),
                                   std::int64_t{0});
  for (std::size_t s = 0; s < rec.final_counts.size(); ++s)
    if (rec.final_counts[s] == n) return vp.names()[s];
  std::ostringstream os;  // mixed absorbing state (possible for general kind)
  for (std::size_t s = 0; s < rec.final_counts.size(); ++s) {
    if (s) os << ",";
    os << vp.names()[s] << ":" << rec.final_counts[s];
  }
  return os.str();
}

TrialRecord run_one_trial(const ExperimentConfig& config, const ValidatedProtocol& vp,
                          std::uint64_t index) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = seed_for_trial(config.base_seed, index);
  Rng rng(rec.seed);
  try {
    if (config.graph == GraphKind::complete) {
      auto out = run_to_absorption(AggregateState::from_counts(config.init_counts),
                                   vp, rng, config.max_steps, nullptr, config.pairing);
      rec.terminal = out.terminal;
      rec.final_counts = std::move(out.final_counts);
      rec.steps = out.steps;
      rec.effective_events = out.effective_events;
    } else if (config.graph == GraphKind::star && is_rps(vp)) {
      auto out = run_star_to_absorption(
          StarState::from_counts(config.star_center, config.init_counts), vp, rng,
          config.max_steps);
      rec.terminal = out.terminal;
      rec.final_counts = out.final_state.leaf_counts;
      rec.final_counts[out.final_state.center] += 1;  // count the hub
      rec.steps = out.steps;
      rec.effective_events = out.effective_events;
    } else {
      Graph g = config.graph == GraphKind::star
                    ? star_graph(config.population())
                    : config.custom_graph;
      std::vector<std::int32_t> sp;
      if (config.graph == GraphKind::star) {
        sp.push_back(config.star_center);
        auto leaves = block_species(config.init_counts);
        sp.insert(sp.end(), leaves.begin(), leaves.end());
      } else {
        sp = block_species(config.init_counts);
      }
      if (static_cast<std::int64_t>(sp.size()) != g.node_count)
        throw Error(Errc::BadConfig, "composition does not match the graph order");
      auto out = run_graph_to_absorption(GraphState::from_species(std::move(g), std::move(sp), vp.k()),
                                         vp, rng, config.max_steps);
      rec.terminal = out.terminal;
      rec.final_counts = std::move(out.final_counts);
      rec.steps = out.steps;
      rec.effective_events = out.effective_events;
    }
    rec.outcome = outcome_key(vp, rec);
  } catch (const Error& e) {
    rec.outcome = std::string("error:") + e.what();
    rec.terminal = Terminal::step_limit;
  }
  return rec;
}

}  // namespace

ExperimentResult run_trials(const ExperimentConfig& config) {
  if (config.trials < 1) throw Error(Errc::BadConfig, "trials must be >= 1");
  ValidatedProtocol vp = validate(config.protocol);
  if (static_cast<int>(config.init_counts.size()) != vp.k())
    throw Error(Errc::BadConfig, "init composition size differs from k");
  for (auto c : config.init_counts)
    if (c < 0) throw Error(Errc::BadConfig, "negative initial count");

  ExperimentResult result;
  result.trials.resize(config.trials);
  const int jobs = std::max(1, config.jobs);

  if (jobs == 1) {
    for (std::uint64_t i = 0; i < config.trials; ++i)
      result.trials[i] = run_one_trial(config, vp, i);
  } else {
    // Independent work items: workers pull indices from a shared counter and
    // write only their own slots; aggregation happens after the join.
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::uint64_t i = next.fetch_add(1);
        if (i >= config.trials) return;
        result.trials[i] = run_one_trial(config, vp, i);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::map<std::string, std::uint64_t> counts;
  for (const auto& rec : result.trials) {
    counts[rec.outcome] += 1;
    if (rec.terminal == Terminal::absorbed)
      result.absorbed_steps.push_back(static_cast<double>(rec.steps));
  }
  for (const auto& [key, cnt] : counts) {
    FrequencyRow row;
    row.outcome = key;
    row.count = cnt;
    row.frequency = static_cast<double>(cnt) / static_cast<double>(config.trials);
    row.ci95 = wilson_interval(cnt, config.trials, kZ95);
    row.ci99 = wilson_interval(cnt, config.trials, kZ99);
    result.table.push_back(std::move(row));
  }
  result.config_hash = config_hash(config);
  return result;
}

namespace {

std::vector<std::int64_t> balanced_split(std::int64_t n, int k) {
  std::vector<std::int64_t> counts(k, n / k);
  for (std::int64_t r = 0; r < n % k; ++r) counts[static_cast<std::size_t>(r)] += 1;
  return counts;
}

}  // namespace

ScalingFit convergence_scaling(const ProtocolSpec& protocol,
                               const std::vector<std::int64_t>& n_list,
                               std::uint64_t trials, double quantile_level,
                               std::uint64_t base_seed, std::uint64_t max_steps,
                               int jobs, PairingMode pairing) {
  if (n_list.size() < 3)
    throw Error(Errc::BadConfig, "scaling fit needs at least 3 population sizes");
  ScalingFit fit;
  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    ExperimentConfig config;
    config.protocol = protocol;
    config.init_counts = balanced_split(n_list[idx], validate(protocol).k());
    config.trials = trials;
    // Disjoint trial streams per population size.
    config.base_seed = seed_for_trial(base_seed, 0x5ca1e000ULL + idx);
    config.max_steps = max_steps;
    config.pairing = pairing;
    config.jobs = jobs;
    auto result = run_trials(config);
    for (const auto& rec : result.trials)
      if (rec.terminal != Terminal::absorbed)
        throw Error(Errc::UnabsorbedTrials,
                    "n = " + std::to_string(n_list[idx]) + ", trial " +
                        std::to_string(rec.index) + ": " + rec.outcome);
    fit.log_n.push_back(std::log(static_cast<double>(n_list[idx])));
    fit.log_quantile.push_back(
        std::log(quantile(result.absorbed_steps, quantile_level)));
  }
  auto ls = least_squares(fit.log_n, fit.log_quantile);
  fit.slope = ls.slope;
  fit.intercept = ls.intercept;
  fit.residuals = std::move(ls.residuals);
  fit.residual_ss = ls.residual_ss;
  return fit;
}

StarStallReport star_stall_experiment(std::vector<std::int64_t> leaf_counts,
                                      std::int32_t center, std::uint64_t trials,
                                      std::uint64_t horizon, std::uint64_t base_seed,
                                      int jobs) {
  if (leaf_counts.size() != 3)
    throw Error(Errc::BadConfig, "star stall experiment is defined for RPS");
  const std::int64_t n = std::accumulate(leaf_counts.begin(), leaf_counts.end(),
                                         std::int64_t{0});
  if (n <= 0) throw Error(Errc::EmptyPopulation, "star has no leaves");
  StarStallReport report;
  report.threshold = calibration::kStarPotentialFactor * std::pow(static_cast<double>(n), 3.0);
  report.trials.resize(trials);
  const auto threshold = static_cast<std::uint64_t>(report.threshold);

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t t = next.fetch_add(1);
      if (t >= trials) return;
      Rng rng(seed_for_trial(base_seed, t));
      StarState state = StarState::from_counts(center, leaf_counts);
      StarStallTrial trial;
      auto potential_of = [&] {
        return static_cast<std::uint64_t>(state.leaf_counts[0]) *
               static_cast<std::uint64_t>(state.leaf_counts[1]) *
               static_cast<std::uint64_t>(state.leaf_counts[2]);
      };
      std::uint64_t u = potential_of();
      trial.min_potential = u;
      bool armed = false;          // below-threshold dip waiting for recovery
      std::uint64_t dip_value = 0;
      while (state.leaf_counts[state.center] != state.n && state.step < horizon) {
        std::uint64_t prev = u;
        if (step_star_prechecked(state, rng)) {
          u = potential_of();
          trial.min_potential = std::min(trial.min_potential, u);
          if (!armed && prev >= threshold && u < threshold) {
            armed = true;
            dip_value = u;
            trial.dipped = true;
          } else if (armed && u > dip_value) {
            trial.recovery_events += 1;
            armed = false;
          }
        }
      }
      trial.absorbed = state.leaf_counts[state.center] == state.n;
      trial.steps = state.step;
      report.trials[t] = trial;
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (const auto& trial : report.trials) {
    report.absorbed_count += trial.absorbed ? 1 : 0;
    report.dipped_count += trial.dipped ? 1 : 0;
    report.recovered_count += (trial.dipped && trial.recovery_events > 0) ? 1 : 0;
  }
  return report;
}

WsReport ws_amplification(std::int64_t n_sheep, double epsilon, std::uint64_t trials,
                          std::uint64_t base_seed, std::uint64_t max_steps, int jobs) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw Error(Errc::BadConfig, "epsilon must lie in [0, 1)");
  ExperimentConfig config;
  config.protocol = builtin("ws");
  std::int64_t nx = std::llround(static_cast<double>(n_sheep) * (1.0 + epsilon) / 2.0);
  config.init_counts = {1, 1, nx, n_sheep - nx};
  config.trials = trials;
  config.base_seed = base_seed;
  config.max_steps = max_steps;
  config.jobs = jobs;
  auto result = run_trials(config);

  WsReport report;
  report.init_counts = config.init_counts;
  for (const auto& row : result.table) {
    if (row.outcome == "X") report.all_x = row.count;
    else if (row.outcome == "Y") report.all_y = row.count;
    else report.other += row.count;
  }
  report.fraction_x = static_cast<double>(report.all_x) / static_cast<double>(trials);
  report.fraction_y = static_cast<double>(report.all_y) / static_cast<double>(trials);
  report.ci95_x = wilson_interval(report.all_x, trials, kZ95);
  report.ci95_y = wilson_interval(report.all_y, trials, kZ95);
  return report;
}

SymmetryReport rps_symmetry_test(const std::vector<double>& x0_fractions,
                                 std::int64_t n, std::uint64_t trials,
                                 std::uint64_t base_seed, int jobs) {
  if (x0_fractions.size() != 3)
    throw Error(Errc::BadConfig, "RPS symmetry test needs 3 fractions");
  auto counts_from = [&](const std::vector<double>& fr) {
    std::vector<std::int64_t> c(3);
    std::int64_t used = 0;
    for (int i = 0; i < 2; ++i) {
      c[i] = std::llround(fr[i] * static_cast<double>(n));
      used += c[i];
    }
    c[2] = n - used;
    return c;
  };
  // y(0) = (x3(0), x1(0), x2(0)): the cyclic shift i -> i+1 of species labels.
  std::vector<double> rotated = {x0_fractions[2], x0_fractions[0], x0_fractions[1]};

  auto run_batch = [&](const std::vector<double>& fr, std::uint64_t seed_salt) {
    ExperimentConfig config;
    config.protocol = builtin("rps");
    config.init_counts = counts_from(fr);
    config.trials = trials;
    config.base_seed = seed_for_trial(base_seed, seed_salt);
    config.jobs = jobs;
    return run_trials(config);
  };
  auto res_x = run_batch(x0_fractions, 0xA);
  auto res_y = run_batch(rotated, 0xB);

  SymmetryReport report;
  auto tally = [&](const ExperimentResult& res, std::array<std::uint64_t, 3>& into,
                   int shift) {
    for (const auto& rec : res.trials) {
      if (rec.terminal != Terminal::absorbed) { report.other += 1; continue; }
      for (int s = 0; s < 3; ++s)
        if (rec.final_counts[s] == n) into[(s + shift) % 3] += 1;
    }
  };
  tally(res_x, report.from_start, 0);
  // P[rotated start absorbs at s+1] = P[x0 absorbs at s]; align by shifting back.
  tally(res_y, report.from_rotated, 2);

  report.chi2 = chi2_two_sample(
      {report.from_start[0], report.from_start[1], report.from_start[2]},
      {report.from_rotated[0], report.from_rotated[1], report.from_rotated[2]});
  return report;
}

}  // namespace lvpop
