#ifndef DSAIR_CLI_CONFIG_HPP
#define DSAIR_CLI_CONFIG_HPP

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dsair/abm.hpp"
#include "dsair/analysis.hpp"
#include "dsair/evolution.hpp"
#include "dsair/race_model.hpp"

namespace dsair::cli {

inline constexpr std::string_view kConfigSchema = "dsair-config/1";
inline constexpr std::string_view kOutputSchema = "dsair-output/1";

struct SweepSection {
  AxisRange x{Axis::s, 1.05, 4.0, 51};
  AxisRange y{Axis::p_r, 0.0, 1.0, 51};
  Metric metric = Metric::AuFrequency;
  std::pair<Strategy, Strategy> dominance{Strategy::AS, Strategy::AU};

  bool operator==(const SweepSection&) const = default;
};

struct SimulateSection {
  double mu = 1e-3;
  std::uint64_t steps = 10'000'000;
  std::optional<std::uint64_t> burn_in;
  std::uint64_t seed = 1;
  // Also solve the analytic chain and report the L1 distance.
  bool compare = false;

  bool operator==(const SimulateSection&) const = default;
};

// One experiment: every parameter any subcommand needs, with defaults taken
// from the reference figure set (b=4, c=1, W=100, B=1e4, beta=0.01, Z=100).
struct ExperimentConfig {
  std::vector<Strategy> strategies{Strategy::AS, Strategy::AU};
  RaceInputs race{4.0, 1.0, 1.5, 100.0, 1.0e4, 0.5, 0.0};
  double s_alpha = 0.0;
  double s_beta = 0.0;
  int Z = 100;
  double beta = 0.01;
  SweepSection sweep;
  SimulateSection simulate;

  bool operator==(const ExperimentConfig&) const = default;

  // Throws ValidationError naming the offending field.
  void validate() const;
  RaceParameters race_parameters() const { return RaceParameters(race); }
  IncentiveSet incentives() const { return IncentiveSet::symmetric(s_alpha, s_beta); }
  EvolutionParameters evolution() const { return EvolutionParameters(Z, beta); }
  SweepSpec sweep_spec() const;
  SimulationConfig simulation_config() const;

  // Canonical form: all sections present, W resolved, burn_in explicit.
  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& doc);
};

}  // namespace dsair::cli

#endif  // DSAIR_CLI_CONFIG_HPP
