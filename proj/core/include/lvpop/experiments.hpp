#ifndef LVPOP_EXPERIMENTS_HPP
#define LVPOP_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lvpop/engine.hpp"
#include "lvpop/stats.hpp"

namespace lvpop {

enum class GraphKind { complete, star, custom };

struct ExperimentConfig {
  ProtocolSpec protocol;
  std::vector<std::int64_t> init_counts;  // size k; on a star these are leaf counts
  GraphKind graph = GraphKind::complete;
  Graph custom_graph;                     // used when graph == custom
  std::int32_t star_center = 0;           // hub species for star runs
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t max_steps = kDefaultMaxSteps;
  PairingMode pairing = PairingMode::exact;
  int jobs = 1;

  std::int64_t population() const;
};

struct TrialRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  Terminal terminal = Terminal::step_limit;
  std::vector<std::int64_t> final_counts;
  std::uint64_t steps = 0;
  std::uint64_t effective_events = 0;
  std::string outcome;  // species name, counts signature, "step_limit", or "error:…"
};

struct FrequencyRow {
  std::string outcome;
  std::uint64_t count = 0;
  double frequency = 0.0;
  WilsonInterval ci95, ci99;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;
  std::vector<FrequencyRow> table;      // counts sum to the trial count exactly
  std::vector<double> absorbed_steps;   // raw steps of absorbed trials, trial order
  std::uint64_t config_hash = 0;
};

// Runs config.trials independent trials, concurrently when jobs > 1. Trial i
// uses the stream seed_for_trial(base_seed, i); results are collected in
// index order and per-trial failures become outcome records instead of
// aborting the batch.
ExperimentResult run_trials(const ExperimentConfig& config);

// Canonical fingerprint of a config (FNV-1a over its canonical JSON).
std::uint64_t config_hash(const ExperimentConfig& config);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> log_n;
  std::vector<double> log_quantile;
  std::vector<double> residuals;
  double residual_ss = 0.0;
};

// Least-squares fit of log(quantile of steps-to-absorption) against log n,
// balanced initial composition, complete graph. Throws UnabsorbedTrials if
// any trial hits the step limit (a censored fit would be meaningless).
ScalingFit convergence_scaling(const ProtocolSpec& protocol,
                               const std::vector<std::int64_t>& n_list,
                               std::uint64_t trials, double quantile_level,
                               std::uint64_t base_seed,
                               std::uint64_t max_steps = kDefaultMaxSteps,
                               int jobs = 1,
                               PairingMode pairing = PairingMode::exact);

struct StarStallTrial {
  bool absorbed = false;
  std::uint64_t steps = 0;
  std::uint64_t min_potential = 0;
  std::uint64_t recovery_events = 0;  // dips under the threshold later exceeded
  bool dipped = false;
};

struct StarStallReport {
  std::vector<StarStallTrial> trials;
  std::uint64_t absorbed_count = 0;
  std::uint64_t dipped_count = 0;
  std::uint64_t recovered_count = 0;  // dipped trials with >= 1 recovery
  double threshold = 0.0;             // 0.037025 * n^3
};

// RPS on the star: per trial, tracks the product potential n1*n2*n3 every
// step, counting recovery events: each downcrossing of the threshold arms a
// dip at value U(T); the dip is recovered once some later U(T') > U(T).
StarStallReport star_stall_experiment(std::vector<std::int64_t> leaf_counts,
                                      std::int32_t center, std::uint64_t trials,
                                      std::uint64_t horizon, std::uint64_t base_seed,
                                      int jobs = 1);

struct WsReport {
  std::uint64_t all_x = 0, all_y = 0, other = 0;
  double fraction_x = 0.0, fraction_y = 0.0;
  WilsonInterval ci95_x, ci95_y;
  std::vector<std::int64_t> init_counts;
};

// WS with one wolf of each kind and n sheep split x:y = (1+eps):(1-eps).
WsReport ws_amplification(std::int64_t n_sheep, double epsilon, std::uint64_t trials,
                          std::uint64_t base_seed,
                          std::uint64_t max_steps = kDefaultMaxSteps, int jobs = 1);

struct SymmetryReport {
  std::array<std::uint64_t, 3> from_start{};    // absorbing species counts from x0
  std::array<std::uint64_t, 3> from_rotated{};  // aligned via the cyclic relabeling
  std::uint64_t other = 0;                      // step-limit trials (either batch)
  Chi2Result chi2;
};

// Exact-symmetry engine check: the absorbing distribution from x0 must match
// the rotation-aligned distribution from the cyclically shifted start.
SymmetryReport rps_symmetry_test(const std::vector<double>& x0_fractions,
                                 std::int64_t n, std::uint64_t trials,
                                 std::uint64_t base_seed, int jobs = 1);

}  // namespace lvpop

#endif
