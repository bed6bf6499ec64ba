// lvpop: simulate / experiment / ode / analyze / builtins over the core
// library. Exit codes: 0 success, 1 validation errors, 2 I/O errors.
// Diagnostics go to stderr; data goes to stdout or --out files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lvpop/experiments.hpp"
#include "lvpop/io.hpp"
#include "lvpop/ode.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lvpop;

namespace {

constexpr const char* kBuildId = "lvpop 0.1.0";

std::vector<std::int64_t> parse_counts(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(std::stoll(item));
  if (out.empty()) throw Error(Errc::BadConfig, "empty count list");
  return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw Error(Errc::BadConfig, "empty value list");
  return out;
}

// --protocol accepts a builtin name or a JSON file path.
ProtocolSpec resolve_protocol(const std::string& ref) {
  for (const auto& name : builtin_names())
    if (ref == name) return builtin(name);
  return load_protocol_file(ref);
}

PairingMode parse_pairing(const std::string& s) {
  if (s == "exact") return PairingMode::exact;
  if (s == "paper") return PairingMode::paper;
  throw Error(Errc::BadConfig, "pairing must be exact or paper");
}

std::string terminal_name(Terminal t) {
  return t == Terminal::absorbed ? "absorbed" : "step_limit";
}

json wilson_json(const WilsonInterval& ci) { return json{ci.low, ci.high}; }

void echo_config(const json& j, bool quiet) {
  if (!quiet) std::cerr << "config: " << j.dump() << "\n";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path.string());
  return out;
}

// Potential of a counts vector under b; -inf once a weighted species dies.
double trace_potential(const std::vector<double>& b,
                       const std::vector<std::int64_t>& counts, double n) {
  double u = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0.0) continue;
    if (counts[i] <= 0) return -std::numeric_limits<double>::infinity();
    u += b[i] * std::log(static_cast<double>(counts[i]) / n);
  }
  return u;
}

struct SimulateArgs {
  std::string protocol;
  std::int64_t n = 0;
  std::string init;
  std::string graph = "complete";
  double max_steps = static_cast<double>(kDefaultMaxSteps);
  std::string trace;
  std::uint64_t trace_stride = 1000;
  std::string pairing = "exact";
  std::int32_t star_center = 0;
};

int run_simulate(const SimulateArgs& args, std::uint64_t seed, bool quiet) {
  ProtocolSpec spec = resolve_protocol(args.protocol);
  ValidatedProtocol vp = validate(spec);
  PairingMode mode = parse_pairing(args.pairing);
  auto max_steps = static_cast<std::uint64_t>(args.max_steps);

  std::vector<std::int64_t> counts;
  if (!args.init.empty()) {
    counts = parse_counts(args.init);
    if (static_cast<int>(counts.size()) != vp.k())
      throw Error(Errc::BadConfig, "--init must list one count per species");
    std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    if (args.n > 0 && total != args.n)
      throw Error(Errc::BadConfig, "--init does not sum to --n");
  } else {
    if (args.n <= 0) throw Error(Errc::BadConfig, "need --n or --init");
    counts.assign(vp.k(), args.n / vp.k());
    for (std::int64_t r = 0; r < args.n % vp.k(); ++r) counts[r] += 1;
  }

  // Case-(i)/(ii) potential for the trace; general-kind protocols have none.
  std::optional<std::vector<double>> b;
  if (vp.kind() == Kind::lv) {
    try {
      b = compute_b(nett_matrix(vp)).b;
    } catch (const Error& e) {
      std::cerr << "warning: no potential vector (" << e.what() << ")\n";
    }
  }

  json config{{"command", "simulate"},     {"protocol", protocol_to_json(spec)},
              {"init", counts},            {"graph", args.graph},
              {"seed", seed},              {"max_steps", max_steps},
              {"pairing", args.pairing},   {"trace_stride", args.trace_stride}};
  echo_config(config, quiet);

  std::ofstream trace_file;
  Recorder recorder;
  const Recorder* rec = nullptr;
  const bool star = args.graph == "star";
  const double n_total = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  if (!args.trace.empty()) {
    trace_file = open_out(args.trace);
    trace_file << "step";
    for (const auto& name : vp.names()) trace_file << "," << name;
    trace_file << ",U_b";
    if (star) trace_file << ",product_potential";
    trace_file << "\n";
    recorder.stride = args.trace_stride;
    recorder.sink = [&](std::uint64_t step, const std::vector<std::int64_t>& c) {
      trace_file << step;
      for (auto v : c) trace_file << "," << v;
      double u = b ? trace_potential(*b, c, n_total)
                   : std::numeric_limits<double>::quiet_NaN();
      trace_file << "," << format_double(u);
      if (star) trace_file << "," << star_product_potential(c).product;
      trace_file << "\n";
    };
    rec = &recorder;
  }

  Rng rng(seed);
  json summary;
  if (args.graph == "complete") {
    auto out = run_to_absorption(AggregateState::from_counts(counts), vp, rng,
                                 max_steps, rec, mode);
    summary = {{"terminal", terminal_name(out.terminal)},
               {"steps", out.steps},
               {"effective_events", out.effective_events},
               {"final_counts", out.final_counts}};
  } else if (star) {
    if (vp.k() != 3 || !is_rps(vp))
      throw Error(Errc::NotRps, "--graph star runs the RPS specialization");
    auto out = run_star_to_absorption(StarState::from_counts(args.star_center, counts),
                                      vp, rng, max_steps, rec);
    summary = {{"terminal", terminal_name(out.terminal)},
               {"steps", out.steps},
               {"effective_events", out.effective_events},
               {"center", out.final_state.center},
               {"leaf_counts", out.final_state.leaf_counts}};
  } else if (args.graph.rfind("file:", 0) == 0) {
    Graph g = load_graph_file(args.graph.substr(5));
    std::vector<std::int32_t> species;
    for (std::size_t s = 0; s < counts.size(); ++s)
      species.insert(species.end(), counts[s], static_cast<std::int32_t>(s));
    if (static_cast<std::int64_t>(species.size()) != g.node_count)
      throw Error(Errc::BadConfig, "composition does not match graph order");
    auto out = run_graph_to_absorption(
        GraphState::from_species(std::move(g), std::move(species), vp.k()), vp, rng,
        max_steps, rec);
    summary = {{"terminal", terminal_name(out.terminal)},
               {"steps", out.steps},
               {"effective_events", out.effective_events},
               {"final_counts", out.final_counts}};
  } else {
    throw Error(Errc::BadConfig, "--graph must be complete, star, or file:g.json");
  }
  summary["seed"] = seed;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

ProtocolSpec protocol_from_config(const json& field, const fs::path& base_dir) {
  if (field.is_string()) {
    std::string ref = field.get<std::string>();
    for (const auto& name : builtin_names())
      if (ref == name) return builtin(name);
    return load_protocol_file((base_dir / ref).string());
  }
  if (field.is_object() && field.contains("file"))
    return load_protocol_file((base_dir / field.at("file").get<std::string>()).string());
  return protocol_from_json(field);
}

void write_trials_csv(const fs::path& path, const ExperimentResult& result) {
  auto out = open_out(path);
  out << "trial_index,seed,terminal,steps,effective_events,outcome\n";
  for (const auto& rec : result.trials)
    out << rec.index << "," << rec.seed << "," << terminal_name(rec.terminal) << ","
        << rec.steps << "," << rec.effective_events << "," << rec.outcome << "\n";
}

json table_json(const ExperimentResult& result) {
  json rows = json::array();
  for (const auto& row : result.table)
    rows.push_back({{"outcome", row.outcome},
                    {"count", row.count},
                    {"frequency", row.frequency},
                    {"ci95", wilson_json(row.ci95)},
                    {"ci99", wilson_json(row.ci99)}});
  return rows;
}

json quantiles_json(const ExperimentResult& result) {
  if (result.absorbed_steps.empty()) return nullptr;
  json q;
  for (auto [name, level] : {std::pair<const char*, double>{"q25", 0.25},
                             {"q50", 0.5},
                             {"q75", 0.75},
                             {"q90", 0.9}})
    q[name] = quantile(result.absorbed_steps, level);
  return q;
}

struct ExperimentArgs {
  std::string config_path;
  std::string out_dir = "results";
  int jobs = 0;
  std::uint64_t trials_override = 0;
  double max_steps_override = 0;
};

int run_experiment(const ExperimentArgs& args, std::uint64_t seed, bool seed_given,
                   bool quiet) {
  std::ifstream in(args.config_path);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + args.config_path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw Error(Errc::BadConfig, std::string(e.what()) + " in " + args.config_path);
  }
  const fs::path base_dir = fs::path(args.config_path).parent_path();
  const std::string kind = cfg.value("kind", "trials");
  const int jobs = args.jobs > 0
                       ? args.jobs
                       : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  // Flags win over config values.
  std::uint64_t base_seed = seed_given ? seed : cfg.value("base_seed", 0ULL);
  std::uint64_t trials = args.trials_override ? args.trials_override
                                              : cfg.value("trials", 1000ULL);
  std::uint64_t max_steps =
      args.max_steps_override > 0
          ? static_cast<std::uint64_t>(args.max_steps_override)
          : static_cast<std::uint64_t>(cfg.value("max_steps",
                                                 static_cast<double>(kDefaultMaxSteps)));

  fs::create_directories(args.out_dir);
  const fs::path out_dir(args.out_dir);
  json summary{{"kind", kind}, {"build", kBuildId}, {"base_seed", base_seed},
               {"trials", trials}, {"jobs", jobs}};

  if (kind == "trials") {
    ExperimentConfig config;
    config.protocol = protocol_from_config(cfg.at("protocol"), base_dir);
    config.init_counts = cfg.at("init").get<std::vector<std::int64_t>>();
    std::string graph = cfg.value("graph", "complete");
    if (graph == "complete") config.graph = GraphKind::complete;
    else if (graph == "star") config.graph = GraphKind::star;
    else {
      config.graph = GraphKind::custom;
      config.custom_graph = load_graph_file((base_dir / graph).string());
    }
    config.star_center = cfg.value("star_center", 0);
    config.trials = trials;
    config.base_seed = base_seed;
    config.max_steps = max_steps;
    config.pairing = parse_pairing(cfg.value("pairing", "exact"));
    config.jobs = jobs;
    echo_config(config_to_json(config), quiet);

    auto result = run_trials(config);
    write_trials_csv(out_dir / "trials.csv", result);
    summary["config_hash"] = result.config_hash;
    summary["table"] = table_json(result);
    summary["step_quantiles"] = quantiles_json(result);
  } else if (kind == "scaling") {
    auto protocol = protocol_from_config(cfg.at("protocol"), base_dir);
    auto n_list = cfg.at("n_list").get<std::vector<std::int64_t>>();
    double q = cfg.value("quantile", 0.5);
    echo_config(summary, quiet);
    auto fit = convergence_scaling(protocol, n_list, trials, q, base_seed, max_steps,
                                   jobs, parse_pairing(cfg.value("pairing", "exact")));
    summary["n_list"] = n_list;
    summary["quantile"] = q;
    summary["slope"] = fit.slope;
    summary["intercept"] = fit.intercept;
    summary["log_n"] = fit.log_n;
    summary["log_quantile"] = fit.log_quantile;
    summary["residuals"] = fit.residuals;
    summary["residual_ss"] = fit.residual_ss;
  } else if (kind == "star_stall") {
    auto leaves = cfg.at("leaf_counts").get<std::vector<std::int64_t>>();
    std::uint64_t horizon = static_cast<std::uint64_t>(cfg.value("horizon", 1e7));
    echo_config(summary, quiet);
    auto report = star_stall_experiment(leaves, cfg.value("center", 0), trials,
                                        horizon, base_seed, jobs);
    auto out = open_out(out_dir / "trials.csv");
    out << "trial_index,absorbed,steps,min_potential,recovery_events,dipped\n";
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
      const auto& t = report.trials[i];
      out << i << "," << t.absorbed << "," << t.steps << "," << t.min_potential << ","
          << t.recovery_events << "," << t.dipped << "\n";
    }
    summary["horizon"] = horizon;
    summary["threshold"] = report.threshold;
    summary["absorbed_count"] = report.absorbed_count;
    summary["dipped_count"] = report.dipped_count;
    summary["recovered_count"] = report.recovered_count;
  } else if (kind == "ws_amplification") {
    std::int64_t n_sheep = cfg.at("n_sheep").get<std::int64_t>();
    double eps = cfg.value("epsilon", 0.0);
    echo_config(summary, quiet);
    auto report = ws_amplification(n_sheep, eps, trials, base_seed, max_steps, jobs);
    summary["n_sheep"] = n_sheep;
    summary["epsilon"] = eps;
    summary["init"] = report.init_counts;
    summary["all_x"] = report.all_x;
    summary["all_y"] = report.all_y;
    summary["other"] = report.other;
    summary["fraction_x"] = report.fraction_x;
    summary["fraction_y"] = report.fraction_y;
    summary["ci95_x"] = wilson_json(report.ci95_x);
    summary["ci95_y"] = wilson_json(report.ci95_y);
  } else if (kind == "rps_symmetry") {
    auto x0 = cfg.at("x0").get<std::vector<double>>();
    std::int64_t n = cfg.at("n").get<std::int64_t>();
    echo_config(summary, quiet);
    auto report = rps_symmetry_test(x0, n, trials, base_seed, jobs);
    summary["n"] = n;
    summary["x0"] = x0;
    summary["from_start"] = report.from_start;
    summary["from_rotated_aligned"] = report.from_rotated;
    summary["other"] = report.other;
    summary["chi2"] = {{"statistic", report.chi2.statistic},
                       {"dof", report.chi2.dof},
                       {"p_value", report.chi2.p_value}};
  } else {
    throw Error(Errc::BadConfig, "unknown experiment kind '" + kind + "'");
  }

  auto sj = open_out(out_dir / "summary.json");
  sj << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct OdeArgs {
  std::string protocol;
  std::string x0;
  double duration = 10.0;
  double h = 1e-3;
  std::string out;
  std::uint64_t sample_every = 1;
};

int run_ode(const OdeArgs& args, bool quiet) {
  ProtocolSpec spec = resolve_protocol(args.protocol);
  ValidatedProtocol vp = validate(spec);
  Matrix a = nett_matrix(vp);  // NotLvKind for general protocols
  auto x0 = parse_doubles(args.x0);
  if (static_cast<int>(x0.size()) != vp.k())
    throw Error(Errc::BadConfig, "--x0 must list one fraction per species");

  auto pv = compute_b(a);
  bool u_defined = true;
  for (int i = 0; i < vp.k(); ++i)
    if (pv.b[i] != 0.0 && x0[i] <= 0.0) u_defined = false;
  if (!u_defined)
    std::cerr << "warning: ZeroPopulation: potential undefined on this boundary "
                 "face; integrating without U\n";

  json config{{"command", "ode"},   {"protocol", protocol_to_json(spec)},
              {"x0", x0},           {"duration", args.duration},
              {"h", args.h},        {"sample_every", args.sample_every}};
  echo_config(config, quiet);

  auto orbit = rk4_integrate(x0, a, args.duration, args.h,
                             u_defined ? &pv.b : nullptr, args.sample_every);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!args.out.empty()) {
    file = open_out(args.out);
    os = &file;
  }
  *os << "t";
  for (const auto& name : vp.names()) *os << "," << name;
  *os << ",U\n";
  for (const auto& s : orbit.samples) {
    *os << format_double(s.t);
    for (double v : s.x) *os << "," << format_double(v);
    double u = u_defined ? potential_U(pv.b, s.x)
                         : std::numeric_limits<double>::quiet_NaN();
    *os << "," << format_double(u) << "\n";
  }
  std::cerr << "max_simplex_drift: " << format_double(orbit.max_simplex_drift) << "\n";
  return 0;
}

int run_analyze(const std::string& protocol_ref, bool with_b, bool quiet) {
  ProtocolSpec spec = resolve_protocol(protocol_ref);
  ValidatedProtocol vp = validate(spec);
  json out{{"protocol", protocol_to_json(spec)}, {"p_min", vp.p_min()}};
  json arcs = json::array();
  for (auto [i, j] : vp.digraph().arcs) arcs.push_back({i, j});
  out["digraph_arcs"] = arcs;
  if (vp.kind() == Kind::lv) {
    auto report = is_irreducible(vp);
    out["irreducible"] = report.irreducible;
    if (!report.irreducible) out["irreducible_reason"] = report.reason;
    Matrix a = nett_matrix(vp);
    out["nett_matrix"] = a;
    if (with_b) {
      auto pv = compute_b(a);
      out["b"] = pv.b;
      out["case"] = pv.tag == PotentialCase::conserved ? "(i)" : "(ii)";
      out["residual"] = pv.residual;
    }
  }
  echo_config(json{{"command", "analyze"}}, quiet);
  std::cout << out.dump(2) << "\n";
  return 0;
}

void print_protocol_text(std::ostream& os, const std::string& name,
                         const ProtocolSpec& spec, const std::string& indent) {
  os << name << ": k=" << spec.k << (spec.kind == Kind::lv ? " lv" : " general")
     << "\n";
  if (spec.kind == Kind::lv) {
    for (int i = 0; i < spec.k; ++i) {
      os << indent << spec.names[i] << " |";
      for (int j = 0; j < spec.k; ++j) os << " " << format_double(spec.matrix[i][j]);
      os << "\n";
    }
  } else {
    for (const auto& r : spec.rules)
      os << indent << "(" << spec.names[r.initiator] << "," << spec.names[r.responder]
         << ") -> " << spec.names[r.result] << " w.p. " << format_double(r.prob)
         << "\n";
  }
}

int run_builtins(const std::string& action, const std::string& name,
                 const std::string& format) {
  if (action == "list") {
    for (const auto& n : builtin_names())
      print_protocol_text(std::cout, n, builtin(n), "  ");
    return 0;
  }
  if (action == "show") {
    auto spec = builtin(name);  // UnknownBuiltin -> exit 1
    if (format == "json")
      std::cout << protocol_to_json(spec).dump(2) << "\n";
    else
      print_protocol_text(std::cout, name, spec, "");
    return 0;
  }
  throw Error(Errc::BadConfig, "builtins action must be list or show");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Lotka-Volterra population protocol toolkit"};
  app.require_subcommand(1);
  // --h is the ode step-size flag, so help stays long-form everywhere.
  app.set_help_flag("--help", "Print help and exit");

  std::uint64_t seed = 0;
  bool quiet = false;
  std::string format = "csv";
  app.add_option("--seed", seed, "Base random seed")->capture_default_str();
  app.add_flag("--quiet", quiet, "Suppress the resolved-config echo");
  app.add_option("--format", format, "Output format for protocol dumps")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one stochastic trajectory");
  simulate->add_option("--protocol", sim.protocol, "Protocol file or builtin name")
      ->required();
  simulate->add_option("--n", sim.n, "Population size (balanced split if no --init)");
  simulate->add_option("--init", sim.init, "Comma-separated initial counts");
  simulate->add_option("--graph", sim.graph,
                       "Interaction graph: complete, star, or file:g.json")
      ->capture_default_str();
  simulate->add_option("--max-steps", sim.max_steps, "Raw scheduler step limit")
      ->capture_default_str();
  simulate->add_option("--trace", sim.trace, "Write a CSV trace to this file");
  simulate->add_option("--trace-stride", sim.trace_stride,
                       "Raw steps between trace rows")
      ->capture_default_str();
  simulate->add_option("--pairing", sim.pairing, "Pair weighting: exact or paper")
      ->check(CLI::IsMember({"exact", "paper"}))
      ->capture_default_str();
  simulate->add_option("--star-center", sim.star_center, "Hub species on the star")
      ->capture_default_str();

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo batch");
  experiment->add_option("--config", exp.config_path, "Experiment config JSON")
      ->required();
  experiment->add_option("--out", exp.out_dir, "Output directory")
      ->capture_default_str();
  experiment->add_option("--jobs", exp.jobs, "Concurrent trial workers (0 = auto)")
      ->capture_default_str();
  experiment->add_option("--trials", exp.trials_override, "Override config trials");
  experiment->add_option("--max-steps", exp.max_steps_override,
                         "Override config step limit");

  OdeArgs ode;
  auto* ode_cmd = app.add_subcommand("ode", "Integrate the mean-field dynamics");
  ode_cmd->set_help_flag("--help", "Print help and exit");
  ode_cmd->add_option("--protocol", ode.protocol, "Protocol file or builtin name")
      ->required();
  ode_cmd->add_option("--x0", ode.x0, "Comma-separated initial fractions")->required();
  ode_cmd->add_option("--duration", ode.duration, "Integration time")
      ->capture_default_str();
  ode_cmd->add_option("--h", ode.h, "RK4 step size")->capture_default_str();
  ode_cmd->add_option("--out", ode.out, "Orbit CSV path (default stdout)");
  ode_cmd->add_option("--sample-every", ode.sample_every, "Steps between samples")
      ->capture_default_str();

  std::string analyze_protocol;
  bool analyze_b = false;
  auto* analyze = app.add_subcommand("analyze", "Report structure and potential");
  analyze->add_option("--protocol", analyze_protocol, "Protocol file or builtin name")
      ->required();
  analyze->add_flag("--b", analyze_b, "Compute the potential vector b");

  std::string builtins_action, builtins_name;
  auto* builtins_cmd =
      app.add_subcommand("builtins", "List or show the built-in protocols");
  builtins_cmd->add_option("action", builtins_action, "list | show")->required();
  builtins_cmd->add_option("name", builtins_name, "Protocol name for show");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand(simulate)) return run_simulate(sim, seed, quiet);
    if (app.got_subcommand(experiment))
      return run_experiment(exp, seed, app.count("--seed") > 0, quiet);
    if (app.got_subcommand(ode_cmd)) return run_ode(ode, quiet);
    if (app.got_subcommand(analyze))
      return run_analyze(analyze_protocol, analyze_b, quiet);
    if (app.got_subcommand(builtins_cmd))
      return run_builtins(builtins_action, builtins_name, format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_io() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
