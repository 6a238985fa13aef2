#include "dsair/abm.hpp"

#include <limits>
#include <utility>

namespace dsair {

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  // Rejection keeps the distribution exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

ImitationProcess::ImitationProcess(PayoffMatrix payoffs, int Z, double beta, double mu, Rng& rng)
    : payoffs_(std::move(payoffs)), beta_(beta), mu_(mu) {
  [[maybe_unused]] const EvolutionParameters checked(Z, beta);
  if (!(mu >= 0.0 && mu <= 1.0)) throw ValidationError("mu", "must lie in [0, 1]");
  if (payoffs_.size() == 0 || payoffs_.size() > 255) {
    throw ValidationError("strategies", "need between 1 and 255 strategies");
  }
  counts_.assign(payoffs_.size(), 0);
  agents_.resize(static_cast<std::size_t>(Z));
  for (auto& a : agents_) {
    a = static_cast<std::uint8_t>(uniform_index(rng, payoffs_.size()));
    ++counts_[a];
  }
}

std::optional<std::size_t> ImitationProcess::monomorphic() const noexcept {
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == population()) return i;
  }
  return std::nullopt;
}

double ImitationProcess::payoff(std::size_t i) const {
  double total = 0.0;
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    const int others = counts_[j] - (i == j ? 1 : 0);
    total += others * payoffs_.at(i, j);
  }
  return total / (population() - 1);
}

void ImitationProcess::step(Rng& rng) {
  const std::uint64_t Z = agents_.size();
  const std::uint64_t focal = uniform_index(rng, Z);
  const std::uint8_t current = agents_[focal];
  std::uint8_t next = current;

  if (mu_ > 0.0 && uniform01(rng) < mu_) {
    next = static_cast<std::uint8_t>(uniform_index(rng, counts_.size()));
  } else {
    std::uint64_t model = uniform_index(rng, Z - 1);
    if (model >= focal) ++model;
    const std::uint8_t candidate = agents_[model];
    if (candidate == current) return;
    const double p = fermi_probability(payoff(current), payoff(candidate), beta_);
    if (uniform01(rng) < p) next = candidate;
  }
  if (next != current) {
    --counts_[current];
    ++counts_[next];
    agents_[focal] = next;
  }
}

void SimulationConfig::validate() const {
  if (!(mu > 0.0 && mu <= 1.0)) {
    throw ValidationError("mu", "must lie in (0, 1]; without exploration the chain is absorbed");
  }
  if (resolved_burn_in() >= steps) throw ValidationError("steps", "must exceed burn_in");
  if (strategies.empty()) throw ValidationError("strategies", "empty strategy set");
}

SimulationOutcome run_simulation(const SimulationConfig& config) {
  config.validate();
  const RaceParameters race(config.race);
  PayoffMatrix payoffs = build_payoff_matrix(config.strategies, race, config.incentives);
  const std::size_t n = payoffs.size();

  Rng rng(config.seed);
  ImitationProcess process(std::move(payoffs), config.Z, config.beta, config.mu, rng);

  const std::uint64_t burn_in = config.resolved_burn_in();
  for (std::uint64_t t = 0; t < burn_in; ++t) process.step(rng);

  // Integer accumulation keeps the averages exact and order independent.
  std::vector<std::uint64_t> occupancy(n, 0);
  std::vector<std::uint64_t> visits(n, 0);
  for (std::uint64_t t = burn_in; t < config.steps; ++t) {
    process.step(rng);
    const auto& counts = process.counts();
    for (std::size_t i = 0; i < n; ++i) occupancy[i] += static_cast<std::uint64_t>(counts[i]);
    if (auto mono = process.monomorphic()) ++visits[*mono];
  }

  SimulationOutcome out;
  out.strategies = config.strategies;
  out.seed = config.seed;
  out.burn_in = burn_in;
  out.monomorphic_visits = std::move(visits);
  const double denom = static_cast<double>(config.steps - burn_in) * config.Z;
  out.frequencies.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.frequencies[i] = static_cast<double>(occupancy[i]) / denom;
  return out;
}

}  // namespace dsair
