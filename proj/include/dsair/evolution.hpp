#ifndef DSAIR_EVOLUTION_HPP
#define DSAIR_EVOLUTION_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dsair/race_model.hpp"

// Pairwise-comparison (Fermi) imitation in a well-mixed population of Z
// players, and the small-mutation Markov chain over monomorphic states.
namespace dsair {

class EvolutionParameters {
 public:
  EvolutionParameters(int Z, double beta);

  int Z() const noexcept { return Z_; }
  double beta() const noexcept { return beta_; }

 private:
  int Z_;
  double beta_;
};

// Payoffs of two strategies A and B against each other.
struct PairEntries {
  double aa;
  double ab;
  double ba;
  double bb;
};

// Entries for invader A and resident B taken from a payoff matrix.
PairEntries pair_entries(const PayoffMatrix& payoffs, std::size_t a, std::size_t b);

// Probability that a player with fitness f_a imitates one with fitness f_b.
// Never returns exactly zero (floored at 1e-300).
double fermi_probability(double f_a, double f_b, double beta);

// Average payoffs of an A player and a B player when k of the Z players use A.
// Requires 1 <= k <= Z-1.
std::pair<double, double> group_payoffs(int k, const PairEntries& e, int Z);

struct StepProbabilities {
  double t_plus;   // k -> k+1
  double t_minus;  // k -> k-1
};

// Requires 0 <= k <= Z; both monomorphic boundaries are absorbing.
StepProbabilities step_probabilities(int k, const PairEntries& e, int Z, double beta);

// Probability that a single A mutant takes over a population of Z-1 B players.
// The log form stays finite when the probability underflows a double.
double log_fixation_probability(const PairEntries& e, const EvolutionParameters& evo);
double fixation_probability(const PairEntries& e, const EvolutionParameters& evo);
double fixation_probability(Strategy invader, Strategy resident, const PayoffMatrix& payoffs,
                            const EvolutionParameters& evo);

struct MarkovChain {
  // fixation(i, j): a single strategies[j] mutant fixates among strategies[i].
  Eigen::MatrixXd fixation;
  // transition(i, j): move from monomorphic state i to state j.
  Eigen::MatrixXd transition;
  // log transition(i, j) off the diagonal, without underflow; -inf on it.
  Eigen::MatrixXd log_rates;
};

// Requires at least two strategies.
MarkovChain build_transition_matrix(const PayoffMatrix& payoffs, const EvolutionParameters& evo);

// Unique probability vector pi with pi * M = pi. Throws ValidationError when
// M is not square and row-stochastic, or when the chain is reducible.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& M);
// Same, from the logs of the off-diagonal entries (diagonal ignored).
Eigen::VectorXd stationary_from_log_rates(const Eigen::MatrixXd& log_rates);

// Large-population risk dominance of A over B. Ties are not dominance.
bool risk_dominant(Strategy a, Strategy b, const PayoffMatrix& payoffs);

struct EvolutionResult {
  PayoffMatrix payoffs;
  Eigen::MatrixXd fixation;
  Eigen::MatrixXd transition;
  Eigen::VectorXd stationary;

  const std::vector<Strategy>& strategies() const noexcept { return payoffs.strategies(); }
  // Long-run fraction of time the population spends monomorphic in s.
  double frequency(Strategy s) const { return stationary(static_cast<Eigen::Index>(payoffs.index_of(s))); }
};

EvolutionResult strategy_frequency(std::span<const Strategy> strategies, const RaceParameters& race,
                                   const IncentiveSet& incentives, const EvolutionParameters& evo);
EvolutionResult strategy_frequency(const PayoffMatrix& payoffs, const EvolutionParameters& evo);

}  // namespace dsair

#endif  // DSAIR_EVOLUTION_HPP
