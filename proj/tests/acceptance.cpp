// Acceptance suite: one criterion per function, one [PASS]/[FAIL] line each.
// Seeds are fixed so the whole suite replays bit-exactly; wall-clock limits
// are asserted where a criterion states one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lvpop/calibration.hpp"
#include "lvpop/experiments.hpp"
#include "lvpop/ode.hpp"
#include "oracles.hpp"

using namespace lvpop;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kJobs = 2;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ExperimentConfig base_config(const char* protocol, std::vector<std::int64_t> init,
                             std::uint64_t trials, std::uint64_t seed) {
  ExperimentConfig c;
  c.protocol = builtin(protocol);
  c.init_counts = std::move(init);
  c.trials = trials;
  c.base_seed = seed;
  c.jobs = kJobs;
  return c;
}

std::uint64_t outcome_count(const ExperimentResult& r, const std::string& key) {
  for (const auto& row : r.table)
    if (row.outcome == key) return row.count;
  return 0;
}

// 1. Fair life and death: empirical absorption near 25/100 plus the exact
//    birth-death solve at 1e-12, inside one minute.
Verdict criterion_1() {
  auto t0 = Clock::now();
  Verdict v;
  std::ostringstream os;

  auto result = run_trials(base_config("life_death", {25, 75}, 10'000, 101));
  double p = static_cast<double>(outcome_count(result, "1")) / 10'000.0;
  bool empirical_ok = std::fabs(p - 0.25) <= calibration::kLifeDeathTol;

  Rng rng(102);
  bool oracle_ok = true;
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    std::int64_t n = 50 + static_cast<std::int64_t>(rng.below(151));  // n <= 200
    std::int64_t i = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n - 1)));
    double err = std::fabs(oracles::life_death_absorb_probability(n, i) -
                           static_cast<double>(i) / static_cast<double>(n));
    worst = std::max(worst, err);
    oracle_ok = oracle_ok && err < 1e-12;
  }
  double wall = seconds_since(t0);
  v.pass = empirical_ok && oracle_ok && wall < 60.0;
  os << "P(all-1)=" << p << " (target 0.25 +/- 0.02), oracle max |p - i/n| = " << worst
     << ", wall " << wall << "s";
  v.detail = os.str();
  return v;
}

// 2. RPS coin-flip consensus at n = 1000.
Verdict criterion_2() {
  auto t0 = Clock::now();
  Verdict v;
  std::ostringstream os;
  auto result = run_trials(base_config("rps", {334, 333, 333}, 3000, 201));
  os << "freqs";
  for (const auto& name : {"1", "2", "3"}) {
    std::uint64_t c = outcome_count(result, name);
    double f = static_cast<double>(c) / 3000.0;
    auto ci = wilson_interval(c, 3000, kZ99);
    bool in_window = f >= calibration::kRpsFreqLow && f <= calibration::kRpsFreqHigh;
    bool covers_third = ci.low <= 1.0 / 3.0 && 1.0 / 3.0 <= ci.high;
    v.pass = v.pass && in_window && covers_third;
    os << " " << name << "=" << f;
  }
  double wall = seconds_since(t0);
  v.pass = v.pass && wall < 600.0;
  os << " (window [0.30, 0.3667], all 99% CIs must cover 1/3), wall " << wall << "s";
  v.detail = os.str();
  return v;
}

// 3. Cyclic-symmetry chi-square.
Verdict criterion_3() {
  Verdict v;
  auto report = rps_symmetry_test({0.5, 0.3, 0.2}, 600, 2000, 301, kJobs);
  v.pass = report.chi2.p_value > calibration::kSymmetryPFloor;
  std::ostringstream os;
  os << "chi2 = " << report.chi2.statistic << ", dof = " << report.chi2.dof
     << ", p = " << report.chi2.p_value << " (floor 0.001)";
  v.detail = os.str();
  return v;
}

// 4. RPS convergence scaling: median steps vs n on a log-log fit.
Verdict criterion_4() {
  Verdict v;
  auto fit = convergence_scaling(builtin("rps"), {125, 250, 500, 1000}, 200, 0.5, 401,
                                 kDefaultMaxSteps, kJobs);
  v.pass = fit.slope >= calibration::kRpsSlopeLow && fit.slope <= calibration::kRpsSlopeHigh;
  std::ostringstream os;
  os << "slope = " << fit.slope << " (window [1.6, 2.4])";
  v.detail = os.str();
  return v;
}

// 5. Star stalling vs complete-graph contrast, plus the recurrence
//    phenomenon: dips under 0.037025 n^3 recover in >= 90% of dipped trials.
Verdict criterion_5() {
  Verdict v;
  std::ostringstream os;
  auto stall = star_stall_experiment({50, 50, 50}, 0, 50, 10'000'000, 501, kJobs);
  bool none_absorbed = stall.absorbed_count == 0;
  double recovery_rate =
      stall.dipped_count == 0
          ? 1.0
          : static_cast<double>(stall.recovered_count) / static_cast<double>(stall.dipped_count);
  bool recovery_ok = recovery_rate >= calibration::kStarRecoveryFloor;

  auto complete = run_trials(base_config("rps", {50, 50, 50}, 50, 502));
  std::uint64_t absorbed = 0;
  for (const auto& rec : complete.trials)
    absorbed += rec.terminal == Terminal::absorbed ? 1 : 0;
  bool contrast_ok = absorbed == 50 && !complete.absorbed_steps.empty() &&
                     quantile(complete.absorbed_steps, 0.5) < 1e6;

  v.pass = none_absorbed && recovery_ok && contrast_ok;
  os << "star absorbed " << stall.absorbed_count << "/50 within 1e7 steps, "
     << stall.recovered_count << "/" << stall.dipped_count
     << " dipped trials recovered; K_150 median "
     << quantile(complete.absorbed_steps, 0.5) << " steps (< 1e6)";
  v.detail = os.str();
  return v;
}

// 6. WS majority amplification. The 0.75 floor is kept exactly as frozen;
//    see the calibration header for what this implementation measures.
Verdict criterion_6() {
  Verdict v;
  std::ostringstream os;
  auto amplified = ws_amplification(20'000, 0.1, 200, 601, kDefaultMaxSteps, kJobs);
  bool floor_ok = amplified.fraction_x >= calibration::kWsAllXMin;
  bool direction_ok = amplified.fraction_x > amplified.fraction_y;

  auto symmetric = ws_amplification(20'000, 0.0, 200, 602, kDefaultMaxSteps, kJobs);
  bool overlap = symmetric.ci95_x.low <= symmetric.ci95_y.high &&
                 symmetric.ci95_y.low <= symmetric.ci95_x.high;

  v.pass = floor_ok && direction_ok && overlap;
  os << "eps=0.1: all-X " << amplified.fraction_x << " (floor 0.75), all-Y "
     << amplified.fraction_y << "; eps=0: " << symmetric.fraction_x << " vs "
     << symmetric.fraction_y << " (95% CIs " << (overlap ? "overlap" : "disjoint")
     << ")";
  v.detail = os.str();
  return v;
}

// 7. Counterexample grows exponentially: successive mean-time ratios and an
//    exponential-vs-polynomial residual comparison. Absorption times are
//    heavy-tailed, so the means are estimated with 4000 trials per size
//    (still under two seconds); the criterion leaves the count free.
Verdict criterion_7() {
  Verdict v;
  std::ostringstream os;
  const std::vector<std::int64_t> sizes{9, 12, 15, 18};
  std::vector<double> means, ns;
  for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
    auto config = base_config("counterexample",
                              {sizes[idx] / 3, sizes[idx] / 3, sizes[idx] / 3}, 4000,
                              701 + idx);
    auto result = run_trials(config);
    double mean = 0.0;
    std::uint64_t absorbed = 0;
    for (const auto& rec : result.trials)
      if (rec.terminal == Terminal::absorbed) {
        mean += static_cast<double>(rec.steps);
        absorbed += 1;
      }
    if (absorbed != result.trials.size()) {
      v.pass = false;
      v.detail = "unabsorbed counterexample trials at n = " + std::to_string(sizes[idx]);
      return v;
    }
    means.push_back(mean / static_cast<double>(absorbed));
    ns.push_back(static_cast<double>(sizes[idx]));
  }
  os << "means";
  bool ratios_ok = true;
  for (std::size_t i = 0; i + 1 < means.size(); ++i) {
    double ratio = means[i + 1] / means[i];
    ratios_ok = ratios_ok && ratio >= calibration::kCounterexampleRatioMin;
    os << " " << means[i] << (i + 2 == means.size() ? "" : ",");
  }
  os << " " << means.back();

  // Exponential model: log t linear in n; polynomial: log t linear in log n.
  std::vector<double> log_t, log_n;
  for (std::size_t i = 0; i < means.size(); ++i) {
    log_t.push_back(std::log(means[i]));
    log_n.push_back(std::log(ns[i]));
  }
  double ss_exp = least_squares(ns, log_t).residual_ss;
  double ss_poly = least_squares(log_n, log_t).residual_ss;
  bool fit_ok = ss_exp < ss_poly;
  os << "; ratios >= 1.5 " << (ratios_ok ? "ok" : "VIOLATED") << ", exp fit rss "
     << ss_exp << " vs poly " << ss_poly;
  v.pass = ratios_ok && fit_ok;
  v.detail = os.str();
  return v;
}

// 8. Potential machinery on the worked protocols.
Verdict criterion_8() {
  Verdict v;
  std::ostringstream os;
  auto rps_pv = compute_b(nett_matrix(validate(builtin("rps"))));
  bool rps_ok = rps_pv.tag == PotentialCase::conserved && rps_pv.residual < 1e-9;
  for (double c : rps_pv.b) rps_ok = rps_ok && std::fabs(c - 1.0) < 1e-9;

  ProtocolSpec dominant;
  dominant.k = 2;
  dominant.kind = Kind::lv;
  dominant.names = {"1", "2"};
  dominant.matrix = {{0, 1}, {0, 0}};
  auto dom_pv = compute_b(nett_matrix(validate(dominant)));
  bool dom_ok = dom_pv.tag == PotentialCase::increasing && dom_pv.residual >= 1e-9;

  v.pass = rps_ok && dom_ok;
  os << "RPS: case (i), b = (" << rps_pv.b[0] << "," << rps_pv.b[1] << ","
     << rps_pv.b[2] << "), residual " << rps_pv.residual
     << "; dominant 2-species: case (ii), min(b'A) = " << dom_pv.residual;
  v.detail = os.str();
  return v;
}

// 9. Drift oracle vs the Monte Carlo mean of one-step potential changes.
Verdict criterion_9() {
  Verdict v;
  std::ostringstream os;
  auto rps = validate(builtin("rps"));
  const std::vector<double> b{1, 1, 1};
  const auto base = AggregateState::from_counts({200, 200, 200});
  const double predicted = expected_delta_U(base, rps, b, PairingMode::paper);
  const double n = 600.0;

  Rng rng(901);
  const int samples = 1'000'000;
  double sum = 0.0, sumsq = 0.0;
  std::vector<double> x(3);
  const double u0 = potential_U(b, {200 / n, 200 / n, 200 / n});
  for (int s = 0; s < samples; ++s) {
    AggregateState st = base;
    step_aggregate(st, rps, rng, PairingMode::paper);
    double du = 0.0;
    if (st.counts != base.counts) {
      for (int i = 0; i < 3; ++i) x[i] = static_cast<double>(st.counts[i]) / n;
      du = potential_U(b, x) - u0;
    }
    sum += du;
    sumsq += du * du;
  }
  double mean = sum / samples;
  double se = std::sqrt((sumsq / samples - mean * mean) / samples);
  double sigmas = std::fabs(mean - predicted) / se;
  v.pass = sigmas <= calibration::kDriftSigmas && predicted < 0.0 && mean < 0.0;
  os << "E[dU] = " << predicted << ", MC mean = " << mean << " (" << sigmas
     << " SE off, cap 4), both negative";
  v.detail = os.str();
  return v;
}

// 10. Continuous conservation, period return, and RK4 order.
Verdict criterion_10() {
  Verdict v;
  std::ostringstream os;
  auto a = nett_matrix(validate(builtin("rps")));
  const std::vector<double> b{1, 1, 1};
  const std::vector<double> x0{0.5, 0.3, 0.2};
  double period = estimate_period(x0, a, 1e-3);
  auto orbit = rk4_integrate(x0, a, period, 1e-3, &b, 0);
  double du = std::fabs(potential_U(b, orbit.samples.back().x) - orbit.u0);
  double ret = d_infty(orbit.samples.back().x, x0);

  // Order probe against a fine reference; at h = 1e-3 the truncation error
  // is already below roundoff, so the ratio is measured where it is visible.
  auto ref = rk4_integrate(x0, a, period, 1e-5, nullptr, 0);
  double e1 = d_infty(rk4_integrate(x0, a, period, 0.025, nullptr, 0).samples.back().x,
                      ref.samples.back().x);
  double e2 = d_infty(rk4_integrate(x0, a, period, 0.0125, nullptr, 0).samples.back().x,
                      ref.samples.back().x);
  double ratio = e1 / e2;
  v.pass = du < 1e-8 && ret < 1e-6 && ratio > 12.0 && ratio < 20.0;
  os << "period " << period << ": |dU| = " << du << " (< 1e-8), return d_inf = " << ret
     << " (< 1e-6), halving ratio " << ratio << " at h = 0.025 -> 0.0125 (~16)";
  v.detail = os.str();
  return v;
}

// 11. Engine equivalences: event-skipping vs direct stepping, and the star
//     chain vs the explicit star graph (embedded jump chains).
Verdict criterion_11() {
  Verdict v;
  std::ostringstream os;
  auto rps = validate(builtin("rps"));

  auto key_of = [](const std::vector<std::int64_t>& c) {
    std::string k;
    for (auto v2 : c) k += std::to_string(v2) + ",";
    return k;
  };

  // (a) state after 100 raw steps at n = 30, 1e6 runs per engine.
  const int runs = 1'000'000;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> merged;
  {
    Rng ra(1101), rb(1102);
    for (int r = 0; r < runs; ++r) {
      auto st = AggregateState::from_counts({10, 10, 10});
      for (int s = 0; s < 100; ++s) step_aggregate(st, rps, ra, PairingMode::exact);
      merged[key_of(st.counts)].first += 1;
    }
    for (int r = 0; r < runs; ++r) {
      auto out = run_to_absorption(AggregateState::from_counts({10, 10, 10}), rps, rb,
                                   100, nullptr, PairingMode::exact);
      merged[key_of(out.final_counts)].second += 1;
    }
  }
  std::vector<std::uint64_t> ca, cb;
  for (const auto& [k, pair] : merged) {
    ca.push_back(pair.first);
    cb.push_back(pair.second);
  }
  auto skip_test = chi2_two_sample(ca, cb);

  // (b) star chain vs explicit star graph after 12 effective events, 10
  //     leaves; the quoted table normalizes away orientation no-ops, so the
  //     comparison is between embedded jump chains.
  const int star_runs = 200'000;
  const int jumps = 12;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> star_merged;
  {
    Rng ra(1103), rb(1104);
    for (int r = 0; r < star_runs; ++r) {
      auto st = StarState::from_counts(0, {4, 3, 3});
      for (int j = 0; j < jumps;) {
        if (st.leaf_counts[st.center] == st.n) break;
        if (step_star(st, rps, ra)) ++j;
      }
      star_merged[std::to_string(st.center) + "|" + key_of(st.leaf_counts)].first += 1;
    }
    auto g = star_graph(10);
    std::vector<std::int32_t> species{0, 0, 0, 0, 0, 1, 1, 1, 2, 2, 2};
    for (int r = 0; r < star_runs; ++r) {
      auto st = GraphState::from_species(g, species, 3);
      for (int j = 0; j < jumps;) {
        if (is_absorbing(st, rps)) break;
        if (step_graph(st, rps, rb)) ++j;
      }
      std::vector<std::int64_t> leaves = st.counts;
      leaves[st.species[0]] -= 1;
      star_merged[std::to_string(st.species[0]) + "|" + key_of(leaves)].second += 1;
    }
  }
  std::vector<std::uint64_t> sa, sb;
  for (const auto& [k, pair] : star_merged) {
    sa.push_back(pair.first);
    sb.push_back(pair.second);
  }
  auto star_test = chi2_two_sample(sa, sb);

  v.pass = skip_test.p_value > calibration::kEquivalencePFloor &&
           star_test.p_value > calibration::kEquivalencePFloor;
  os << "effective-vs-direct p = " << skip_test.p_value << ", star-vs-graph p = "
     << star_test.p_value << " (floor 0.01)";
  v.detail = os.str();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    int number;
    const char* name;
    Verdict (*fn)();
  };
  const Entry entries[] = {
      {1, "life-and-death proportional absorption + exact chain oracle", criterion_1},
      {2, "RPS coin-flip consensus at n=1000", criterion_2},
      {3, "RPS cyclic-symmetry chi-square", criterion_3},
      {4, "RPS convergence scaling slope", criterion_4},
      {5, "star stalling vs complete contrast", criterion_5},
      {6, "WS majority amplification", criterion_6},
      {7, "counterexample exponential growth", criterion_7},
      {8, "potential vector cases", criterion_8},
      {9, "drift oracle agreement", criterion_9},
      {10, "RK4 conservation, return, order", criterion_10},
      {11, "engine equivalences", criterion_11},
  };
  // Optional arguments select individual criteria by number.
  std::vector<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.push_back(std::atoi(argv[a]));

  int failures = 0, ran = 0;
  auto t0 = Clock::now();
  for (const auto& entry : entries) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), entry.number) == wanted.end())
      continue;
    auto verdict = entry.fn();
    std::printf("[%s] %d. %s: %s\n", verdict.pass ? "PASS" : "FAIL", entry.number,
                entry.name, verdict.detail.c_str());
    std::fflush(stdout);
    failures += verdict.pass ? 0 : 1;
    ran += 1;
  }
  std::printf("%d/%d criteria passed in %.1fs\n", ran - failures, ran,
              std::chrono::duration<double>(Clock::now() - t0).count());
  return failures == 0 ? 0 : 1;
}
