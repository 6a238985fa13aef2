#include "dsair/cli/config.hpp"

#include <set>
#include <string>

namespace dsair::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ValidationError(where, "must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ValidationError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

template <class T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + "." + key, "has the wrong type");
  }
}

json axis_json(const AxisRange& a) {
  return {{"axis", std::string(to_string(a.axis))}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}};
}

AxisRange read_axis(const json& obj, const std::string& where, AxisRange a) {
  reject_unknown(obj, where, {"axis", "min", "max", "steps"});
  std::string name(to_string(a.axis));
  read(obj, "axis", where, name);
  a.axis = parse_axis(name);
  read(obj, "min", where, a.min);
  read(obj, "max", where, a.max);
  read(obj, "steps", where, a.steps);
  return a;
}

std::vector<Strategy> read_strategies(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ValidationError(where, "must be an array of strategy tags");
  std::string joined;
  for (const auto& tag : arr) {
    if (!tag.is_string()) throw ValidationError(where, "must be an array of strategy tags");
    if (!joined.empty()) joined += ',';
    joined += tag.get<std::string>();
  }
  if (joined.empty()) throw ValidationError(where, "must not be empty");
  return parse_strategy_list(joined);
}

json strategies_json(std::span<const Strategy> strategies) {
  json arr = json::array();
  for (Strategy s : strategies) arr.push_back(std::string(to_string(s)));
  return arr;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (strategies.empty()) throw ValidationError("strategies", "must not be empty");
  race_parameters();
  incentives();
  evolution();
}

SweepSpec ExperimentConfig::sweep_spec() const {
  SweepSpec spec;
  spec.strategies = strategies;
  spec.race = race;
  spec.s_alpha = s_alpha;
  spec.s_beta = s_beta;
  spec.Z = Z;
  spec.beta = beta;
  spec.x = sweep.x;
  spec.y = sweep.y;
  spec.metric = sweep.metric;
  spec.dominance = sweep.dominance;
  return spec;
}

SimulationConfig ExperimentConfig::simulation_config() const {
  SimulationConfig cfg;
  cfg.strategies = strategies;
  cfg.mu = simulate.mu;
  cfg.steps = simulate.steps;
  cfg.burn_in = simulate.burn_in;
  cfg.seed = simulate.seed;
  cfg.race = race;
  cfg.incentives = incentives();
  cfg.Z = Z;
  cfg.beta = beta;
  return cfg;
}

json ExperimentConfig::to_json() const {
  json doc;
  doc["schema"] = std::string(kConfigSchema);
  doc["strategies"] = strategies_json(strategies);
  doc["race"] = {{"b", race.b}, {"c", race.c}, {"s", race.s}, {"W", race.W},
                 {"B", race.B}, {"p_r", race.p_r}, {"p_fo", race.p_fo}};
  doc["incentive"] = {{"s_alpha", s_alpha}, {"s_beta", s_beta}};
  doc["evolution"] = {{"Z", Z}, {"beta", beta}};
  doc["sweep"] = {{"x", axis_json(sweep.x)},
                  {"y", axis_json(sweep.y)},
                  {"metric", std::string(to_string(sweep.metric))},
                  {"dominance", strategies_json(std::vector{sweep.dominance.first, sweep.dominance.second})}};
  doc["simulate"] = {{"mu", simulate.mu},
                     {"steps", simulate.steps},
                     {"burn_in", simulate.burn_in.value_or(simulate.steps / 10)},
                     {"seed", simulate.seed},
                     {"compare", simulate.compare}};
  return doc;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  ExperimentConfig cfg;
  reject_unknown(doc, "", {"schema", "strategies", "race", "incentive", "evolution", "sweep", "simulate"});
  if (auto it = doc.find("schema"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>() != kConfigSchema) {
      throw ValidationError("schema", "expected '" + std::string(kConfigSchema) + "'");
    }
  }
  if (auto it = doc.find("strategies"); it != doc.end()) cfg.strategies = read_strategies(*it, "strategies");

  if (auto it = doc.find("race"); it != doc.end()) {
    const json& r = *it;
    reject_unknown(r, "race", {"b", "c", "s", "W", "omega", "B", "p_r", "p_fo"});
    read(r, "b", "race", cfg.race.b);
    read(r, "c", "race", cfg.race.c);
    read(r, "s", "race", cfg.race.s);
    read(r, "B", "race", cfg.race.B);
    read(r, "p_r", "race", cfg.race.p_r);
    read(r, "p_fo", "race", cfg.race.p_fo);
    if (r.contains("W") && r.contains("omega")) throw ValidationError("race.omega", "conflicts with race.W");
    read(r, "W", "race", cfg.race.W);
    if (r.contains("omega")) {
      double omega = 0.0;
      read(r, "omega", "race", omega);
      cfg.race.W = rounds_from_continuation(omega);
    }
  }
  if (auto it = doc.find("incentive"); it != doc.end()) {
    reject_unknown(*it, "incentive", {"s_alpha", "s_beta"});
    read(*it, "s_alpha", "incentive", cfg.s_alpha);
    read(*it, "s_beta", "incentive", cfg.s_beta);
  }
  if (auto it = doc.find("evolution"); it != doc.end()) {
    reject_unknown(*it, "evolution", {"Z", "beta"});
    read(*it, "Z", "evolution", cfg.Z);
    read(*it, "beta", "evolution", cfg.beta);
  }
  if (auto it = doc.find("sweep"); it != doc.end()) {
    const json& s = *it;
    reject_unknown(s, "sweep", {"x", "y", "metric", "dominance"});
    if (s.contains("x")) cfg.sweep.x = read_axis(s["x"], "sweep.x", cfg.sweep.x);
    if (s.contains("y")) cfg.sweep.y = read_axis(s["y"], "sweep.y", cfg.sweep.y);
    std::string metric(to_string(cfg.sweep.metric));
    read(s, "metric", "sweep", metric);
    cfg.sweep.metric = parse_metric(metric);
    if (s.contains("dominance")) {
      const auto pair = read_strategies(s["dominance"], "sweep.dominance");
      if (pair.size() != 2) throw ValidationError("sweep.dominance", "needs exactly two strategies");
      cfg.sweep.dominance = {pair[0], pair[1]};
    }
  }
  if (auto it = doc.find("simulate"); it != doc.end()) {
    const json& s = *it;
    reject_unknown(s, "simulate", {"mu", "steps", "burn_in", "seed", "compare"});
    read(s, "mu", "simulate", cfg.simulate.mu);
    read(s, "steps", "simulate", cfg.simulate.steps);
    read(s, "seed", "simulate", cfg.simulate.seed);
    read(s, "compare", "simulate", cfg.simulate.compare);
    if (s.contains("burn_in") && !s["burn_in"].is_null()) {
      std::uint64_t burn = 0;
      read(s, "burn_in", "simulate", burn);
      cfg.simulate.burn_in = burn;
    }
  }
  return cfg;
}

}  // namespace dsair::cli
