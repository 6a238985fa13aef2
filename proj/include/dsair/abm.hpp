#ifndef DSAIR_ABM_HPP
#define DSAIR_ABM_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "dsair/evolution.hpp"
#include "dsair/race_model.hpp"

// Agent-based Monte Carlo realisation of imitation with exploration. Agents
// earn the exact expected payoff against the rest of the population; each
// update picks one focal agent which either explores (probability mu) or
// compares itself with a random model agent using the Fermi rule.
namespace dsair {

using Rng = std::mt19937_64;
inline constexpr std::string_view kRngName = "std::mt19937_64";

// Uniform draws that depend only on the engine's output sequence, so runs
// reproduce bit for bit across standard library implementations.
double uniform01(Rng& rng);
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

class ImitationProcess {
 public:
  // Agents start with strategies drawn uniformly from the payoff matrix.
  // mu may be zero here (pure imitation).
  ImitationProcess(PayoffMatrix payoffs, int Z, double beta, double mu, Rng& rng);

  void step(Rng& rng);

  const std::vector<int>& counts() const noexcept { return counts_; }
  int population() const noexcept { return static_cast<int>(agents_.size()); }
  // Index of the only strategy present, if any.
  std::optional<std::size_t> monomorphic() const noexcept;
  // Expected payoff of a strategy-i agent given the current counts.
  double payoff(std::size_t i) const;

 private:
  PayoffMatrix payoffs_;
  double beta_;
  double mu_;
  std::vector<std::uint8_t> agents_;
  std::vector<int> counts_;
};

struct SimulationConfig {
  std::vector<Strategy> strategies;
  double mu = 1e-3;
  std::uint64_t steps = 10'000'000;
  // Defaults to 10% of steps.
  std::optional<std::uint64_t> burn_in;
  std::uint64_t seed = 1;
  RaceInputs race;
  IncentiveSet incentives;
  int Z = 100;
  double beta = 0.01;

  std::uint64_t resolved_burn_in() const { return burn_in.value_or(steps / 10); }
  // Throws ValidationError on mu outside (0, 1] or burn_in >= steps.
  void validate() const;
};

struct SimulationOutcome {
  std::vector<Strategy> strategies;
  // Time-averaged strategy frequencies after burn-in.
  std::vector<double> frequencies;
  // Post burn-in updates spent monomorphic in each strategy.
  std::vector<std::uint64_t> monomorphic_visits;
  std::uint64_t seed;
  std::uint64_t burn_in;
  std::string_view generator = kRngName;
};

SimulationOutcome run_simulation(const SimulationConfig& config);

}  // namespace dsair

#endif  // DSAIR_ABM_HPP
