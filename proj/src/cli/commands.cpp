#include "dsair/cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <ostream>

#include "CLI11.hpp"

#include "dsair/cli/output.hpp"

namespace dsair::cli {

using nlohmann::json;

namespace {

json base_meta(const ExperimentConfig& cfg, std::string_view command) {
  return {{"schema", std::string(kOutputSchema)}, {"command", std::string(command)}, {"config", cfg.to_json()}};
}

void emit(const std::optional<std::string>& out, const std::string& csv, json meta, std::ostream& os) {
  if (!out) {
    os << csv;
    return;
  }
  meta["files"] = {{"csv", *out}};
  write_file(*out, csv);
  write_file(meta_path(*out), dump_json(meta));
  os << "wrote " << *out << " and " << meta_path(*out) << "\n";
}

json curves_json(const std::vector<ThresholdCurve>& curves) {
  json arr = json::array();
  for (const auto& c : curves) {
    json pts = json::array();
    for (const auto& [s, p] : c.points) pts.push_back({s, p});
    arr.push_back({{"name", c.name}, {"points", pts}});
  }
  return arr;
}

bool has(const std::vector<Strategy>& set, Strategy s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

std::vector<ThresholdCurve> curves_for(const ExperimentConfig& cfg, double s_min, double s_max) {
  std::optional<double> punish;
  std::optional<std::pair<double, double>> reward;
  if (has(cfg.strategies, Strategy::PS) && cfg.s_alpha == cfg.s_beta) punish = cfg.s_alpha;
  if (has(cfg.strategies, Strategy::RS)) reward = std::pair{cfg.s_alpha, cfg.s_beta};
  return threshold_curves(s_min, s_max, 101, cfg.race.W, punish, reward);
}

}  // namespace

void cmd_payoffs(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os) {
  cfg.validate();
  const PayoffMatrix m = build_payoff_matrix(cfg.strategies, cfg.race_parameters(), cfg.incentives());
  CsvWriter csv({"row", "col", "payoff"});
  json table = json::object();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const std::string r(to_string(m.strategies()[i])), c(to_string(m.strategies()[j]));
      csv.row({r, c, format_number(m.at(i, j))});
      table[r][c] = m.at(i, j);
    }
  }
  json meta = base_meta(cfg, "payoffs");
  meta["payoffs"] = table;
  emit(out, csv.str(), std::move(meta), os);
}

void cmd_evolve(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os) {
  cfg.validate();
  const EvolutionResult r = strategy_frequency(cfg.strategies, cfg.race_parameters(), cfg.incentives(),
                                               cfg.evolution());
  const auto& names = r.strategies();
  const auto n = static_cast<Eigen::Index>(names.size());
  auto label = [&](Eigen::Index i) { return std::string(to_string(names[static_cast<std::size_t>(i)])); };

  CsvWriter csv({"quantity", "from", "to", "value"});
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      csv.row({"payoff", label(i), label(j),
               format_number(r.payoffs.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))});
    }
  }
  // fixation rows read "from resident, to invader".
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) csv.row({"fixation", label(i), label(j), format_number(r.fixation(i, j))});
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) csv.row({"transition", label(i), label(j), format_number(r.transition(i, j))});
  }
  json stationary = json::object();
  for (Eigen::Index i = 0; i < n; ++i) {
    csv.row({"stationary", label(i), "", format_number(r.stationary(i))});
    stationary[label(i)] = r.stationary(i);
  }

  json meta = base_meta(cfg, "evolve");
  meta["stationary"] = stationary;
  meta["neutral_fixation"] = 1.0 / cfg.Z;
  meta["neutral_tolerance"] = 1e-9;
  emit(out, csv.str(), std::move(meta), os);
}

void cmd_sweep(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os,
               unsigned threads) {
  cfg.validate();
  const SweepSpec spec = cfg.sweep_spec();
  const SweepResult res = run_sweep(spec, threads);

  CsvWriter csv({"axis1", "axis2", "metric", "region", "strategy"});
  json errors = json::array();
  for (const SweepCell& c : res.cells) {
    const std::string x = format_number(c.x), y = format_number(c.y);
    const std::string region = c.region ? std::string(to_string(*c.region)) : "";
    std::vector<std::string> labels;
    switch (spec.metric) {
      case Metric::AuFrequency: labels = {"AU"}; break;
      case Metric::StrategyFrequencies:
        for (Strategy s : spec.strategies) labels.emplace_back(to_string(s));
        break;
      case Metric::RiskDominance:
        labels = {std::string(to_string(spec.dominance.first)) + ">" + std::string(to_string(spec.dominance.second))};
        break;
    }
    if (!c.ok()) errors.push_back({{"ix", c.ix}, {"iy", c.iy}, {"error", c.error}});
    for (std::size_t k = 0; k < labels.size(); ++k) {
      csv.row({x, y, c.ok() ? format_number(c.values[k]) : "", region, labels[k]});
    }
  }

  json meta = base_meta(cfg, "sweep");
  meta["axes"] = {{"axis1", std::string(to_string(spec.x.axis))}, {"axis2", std::string(to_string(spec.y.axis))}};
  meta["metric"] = std::string(to_string(spec.metric));
  meta["grid"] = std::to_string(spec.x.steps) + "x" + std::to_string(spec.y.steps);
  meta["cell_errors"] = errors;
  const bool plane = (spec.x.axis == Axis::s && spec.y.axis == Axis::p_r);
  if (plane) meta["curves"] = curves_json(curves_for(cfg, spec.x.min, spec.x.max));
  emit(out, csv.str(), std::move(meta), os);
}

void cmd_simulate(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os) {
  cfg.validate();
  const SimulationConfig sim = cfg.simulation_config();
  sim.validate();
  const SimulationOutcome res = run_simulation(sim);

  std::optional<EvolutionResult> analytic;
  if (cfg.simulate.compare) {
    analytic = strategy_frequency(cfg.strategies, cfg.race_parameters(), cfg.incentives(), cfg.evolution());
  }
  std::vector<std::string> header{"strategy", "abm_frequency", "monomorphic_visits"};
  if (analytic) header.emplace_back("analytic_frequency");
  CsvWriter csv(header);
  double l1 = 0.0;
  json freqs = json::object();
  for (std::size_t i = 0; i < res.strategies.size(); ++i) {
    const std::string name(to_string(res.strategies[i]));
    std::vector<std::string> row{name, format_number(res.frequencies[i]), std::to_string(res.monomorphic_visits[i])};
    freqs[name] = res.frequencies[i];
    if (analytic) {
      const double a = analytic->stationary(static_cast<Eigen::Index>(i));
      l1 += std::abs(a - res.frequencies[i]);
      row.push_back(format_number(a));
    }
    csv.row(row);
  }

  json meta = base_meta(cfg, "simulate");
  meta["seed"] = res.seed;
  meta["generator"] = std::string(res.generator);
  meta["burn_in"] = res.burn_in;
  meta["frequencies"] = freqs;
  if (analytic) meta["l1_distance"] = l1;
  emit(out, csv.str(), std::move(meta), os);
  if (analytic && out) os << "L1 distance to analytic stationary distribution: " << format_number(l1) << "\n";
}

void cmd_regions(const ExperimentConfig& cfg, const std::optional<std::string>& out, std::ostream& os) {
  cfg.validate();
  const AxisRange* s_axis = nullptr;
  const AxisRange* p_axis = nullptr;
  for (const AxisRange* a : {&cfg.sweep.x, &cfg.sweep.y}) {
    if (a->axis == Axis::s) s_axis = a;
    if (a->axis == Axis::p_r) p_axis = a;
  }
  if (!s_axis || !p_axis) throw ValidationError("sweep.axis", "regions needs the axes s and p_r");
  SweepSpec check = cfg.sweep_spec();
  check.metric = Metric::RiskDominance;
  check.validate();
  if (s_axis->min <= 1.0) throw ValidationError("sweep.x.min", "s must exceed 1");

  const bool split = has(cfg.strategies, Strategy::PS) && cfg.s_alpha == cfg.s_beta;
  CsvWriter csv({"s", "p_r", "region"});
  for (double s : s_axis->values()) {
    for (double p : p_axis->values()) {
      const Region r = split ? classify_region(s, p, cfg.race.W, cfg.s_alpha) : classify_region(s, p);
      csv.row({format_number(s), format_number(p), std::string(to_string(r))});
    }
  }
  const auto curves = curves_for(cfg, s_axis->min, s_axis->max);
  CsvWriter curve_csv({"curve", "s", "p_r"});
  for (const auto& c : curves) {
    for (const auto& [s, p] : c.points) curve_csv.row({c.name, format_number(s), format_number(p)});
  }

  json meta = base_meta(cfg, "regions");
  meta["curves"] = curves_json(curves);
  if (out) {
    const std::string curves_path = *out + ".curves.csv";
    write_file(curves_path, curve_csv.str());
    meta["files"] = {{"curves_csv", curves_path}};
  }
  if (out) {
    json files = meta["files"];
    files["csv"] = *out;
    write_file(*out, csv.str());
    meta["files"] = files;
    write_file(meta_path(*out), dump_json(meta));
    os << "wrote " << *out << ", " << *out << ".curves.csv and " << meta_path(*out) << "\n";
  } else {
    os << csv.str();
  }
}

unsigned threads_from_env() {
  const char* v = std::getenv("DSAIR_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw ValidationError("DSAIR_THREADS", "must be a positive integer");
  return static_cast<unsigned>(n);
}

namespace {

// Flags shared by every subcommand; each overrides the config file value
// only when given on the command line.
struct Flags {
  std::string config;
  std::string out;
  std::string strategies;
  double b = 0, c = 0, s = 0, W = 0, omega = 0, B = 0, pr = 0, pfo = 0, s_alpha = 0, s_beta = 0;
  double beta = 0, mu = 0;
  int Z = 0;
  std::uint64_t steps = 0, seed = 0, burn_in = 0;
  std::string x_axis, y_axis, metric, dominance;
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  int x_steps = 0, y_steps = 0;
  bool compare = false;
};

struct Bound {
  CLI::App* app;
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> setters;
  CLI::Option* out = nullptr;
  CLI::Option* config = nullptr;
};

Bound bind_flags(CLI::App* app, Flags& f) {
  Bound bound{app, {}, nullptr, nullptr};
  auto num = [&](const char* name, auto& target, const char* help, auto apply) {
    CLI::Option* opt = app->add_option(name, target, help);
    bound.setters.emplace_back(opt, apply);
    return opt;
  };
  bound.config = app->add_option("--config", f.config, "JSON experiment file");
  bound.out = app->add_option("--out", f.out, "output CSV path (a .meta.json sidecar is written next to it)");
  num("--strategies", f.strategies, "comma separated strategy set, e.g. AS,AU,PS",
      [&f](ExperimentConfig& c) { c.strategies = parse_strategy_list(f.strategies); });
  num("--b", f.b, "per-round benefit", [&f](ExperimentConfig& c) { c.race.b = f.b; });
  num("--c", f.c, "per-round safety cost", [&f](ExperimentConfig& c) { c.race.c = f.c; });
  num("--s", f.s, "unsafe speed", [&f](ExperimentConfig& c) { c.race.s = f.s; });
  auto* w = num("--W", f.W, "mean number of rounds", [&f](ExperimentConfig& c) { c.race.W = f.W; });
  auto* om = num("--omega", f.omega, "continuation probability (W = 1/(1-omega))",
                 [&f](ExperimentConfig& c) { c.race.W = rounds_from_continuation(f.omega); });
  w->excludes(om);
  num("--B", f.B, "prize", [&f](ExperimentConfig& c) { c.race.B = f.B; });
  num("--pr", f.pr, "disaster probability", [&f](ExperimentConfig& c) { c.race.p_r = f.pr; });
  num("--pfo", f.pfo, "per-round detection probability", [&f](ExperimentConfig& c) { c.race.p_fo = f.pfo; });
  num("--s-alpha", f.s_alpha, "incentive cost to own speed", [&f](ExperimentConfig& c) { c.s_alpha = f.s_alpha; });
  num("--s-beta", f.s_beta, "incentive effect on co-player speed", [&f](ExperimentConfig& c) { c.s_beta = f.s_beta; });
  num("--beta", f.beta, "intensity of selection", [&f](ExperimentConfig& c) { c.beta = f.beta; });
  num("--Z", f.Z, "population size", [&f](ExperimentConfig& c) { c.Z = f.Z; });
  num("--mu", f.mu, "exploration probability per update", [&f](ExperimentConfig& c) { c.simulate.mu = f.mu; });
  num("--steps", f.steps, "simulation updates", [&f](ExperimentConfig& c) { c.simulate.steps = f.steps; });
  num("--seed", f.seed, "simulation seed", [&f](ExperimentConfig& c) { c.simulate.seed = f.seed; });
  num("--burn-in", f.burn_in, "discarded updates", [&f](ExperimentConfig& c) { c.simulate.burn_in = f.burn_in; });
  num("--x-axis", f.x_axis, "first swept axis: s, p_r, s_alpha, s_beta",
      [&f](ExperimentConfig& c) { c.sweep.x.axis = parse_axis(f.x_axis); });
  num("--x-min", f.x_min, "", [&f](ExperimentConfig& c) { c.sweep.x.min = f.x_min; });
  num("--x-max", f.x_max, "", [&f](ExperimentConfig& c) { c.sweep.x.max = f.x_max; });
  num("--x-steps", f.x_steps, "", [&f](ExperimentConfig& c) { c.sweep.x.steps = f.x_steps; });
  num("--y-axis", f.y_axis, "second swept axis", [&f](ExperimentConfig& c) { c.sweep.y.axis = parse_axis(f.y_axis); });
  num("--y-min", f.y_min, "", [&f](ExperimentConfig& c) { c.sweep.y.min = f.y_min; });
  num("--y-max", f.y_max, "", [&f](ExperimentConfig& c) { c.sweep.y.max = f.y_max; });
  num("--y-steps", f.y_steps, "", [&f](ExperimentConfig& c) { c.sweep.y.steps = f.y_steps; });
  num("--metric", f.metric, "au_frequency, strategy_frequencies or risk_dominance",
      [&f](ExperimentConfig& c) { c.sweep.metric = parse_metric(f.metric); });
  num("--dominance", f.dominance, "pair for risk_dominance, e.g. PS,AU", [&f](ExperimentConfig& c) {
    const auto pair = parse_strategy_list(f.dominance);
    if (pair.size() != 2) throw ValidationError("dominance", "needs exactly two strategies");
    c.sweep.dominance = {pair[0], pair[1]};
  });
  auto* cmp = app->add_flag("--compare", f.compare, "also report the analytic distribution and L1 distance");
  bound.setters.emplace_back(cmp, [&f](ExperimentConfig& c) { c.simulate.compare = f.compare; });
  return bound;
}

void report(std::ostream& err, std::string_view kind, const std::string& field, const std::string& message) {
  json e = {{"error", std::string(kind)}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  err << e.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& os, std::ostream& err) {
  CLI::App app{"Evolutionary dynamics of safety compliance in technology races", "dsair"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<Bound> bound;
  const std::pair<const char*, const char*> commands[] = {
      {"payoffs", "pairwise payoff matrix"},
      {"evolve", "fixation probabilities, transition matrix and stationary distribution"},
      {"sweep", "grid of evolutionary outcomes over two parameters"},
      {"simulate", "agent-based simulation of the population"},
      {"regions", "region map over (s, p_r) with incentive curves"},
  };
  for (const auto& [name, help] : commands) {
    bound.push_back(bind_flags(app.add_subcommand(name, help), flags));
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    os << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    os << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", "", e.what());
    return kExitValidation;
  }

  try {
    const Bound* active = nullptr;
    for (const Bound& b : bound) {
      if (b.app->parsed()) active = &b;
    }
    ExperimentConfig cfg;
    if (active->config->count()) cfg = ExperimentConfig::from_json(json::parse(read_file(flags.config)));
    for (const auto& [opt, apply] : active->setters) {
      if (opt->count()) apply(cfg);
    }
    const std::optional<std::string> out =
        active->out->count() ? std::optional<std::string>(flags.out) : std::nullopt;
    const std::string name = active->app->get_name();
    if (name == "payoffs") cmd_payoffs(cfg, out, os);
    else if (name == "evolve") cmd_evolve(cfg, out, os);
    else if (name == "sweep") cmd_sweep(cfg, out, os, threads_from_env());
    else if (name == "simulate") cmd_simulate(cfg, out, os);
    else cmd_regions(cfg, out, os);
  } catch (const ValidationError& e) {
    report(err, "validation", e.field(), e.what());
    return kExitValidation;
  } catch (const UnsupportedPairError& e) {
    report(err, "unsupported_pair", "strategies", e.what());
    return kExitUnsupportedPair;
  } catch (const IoError& e) {
    report(err, "io", "", e.what());
    return kExitIo;
  } catch (const json::parse_error& e) {
    report(err, "validation", "config", e.what());
    return kExitValidation;
  } catch (const DomainError& e) {
    report(err, "validation", "", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    report(err, "internal", "", e.what());
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace dsair::cli
