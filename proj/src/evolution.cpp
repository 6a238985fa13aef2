#include "dsair/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dsair {

namespace {

constexpr double kFermiFloor = 1e-300;

void check_k(int k, int lo, int hi) {
  if (k < lo || k > hi) {
    throw DomainError("k = " + std::to_string(k) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
}

}  // namespace

EvolutionParameters::EvolutionParameters(int Z, double beta) : Z_(Z), beta_(beta) {
  if (Z < 2) throw ValidationError("Z", "population size must be at least 2");
  if (!std::isfinite(beta) || beta < 0.0) throw ValidationError("beta", "must be a non-negative number");
}

PairEntries pair_entries(const PayoffMatrix& payoffs, std::size_t a, std::size_t b) {
  return {payoffs.at(a, a), payoffs.at(a, b), payoffs.at(b, a), payoffs.at(b, b)};
}

double fermi_probability(double f_a, double f_b, double beta) {
  const double x = beta * (f_b - f_a);
  // Evaluate on the side where exp() cannot overflow.
  const double p = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  return std::max(p, kFermiFloor);
}

std::pair<double, double> group_payoffs(int k, const PairEntries& e, int Z) {
  check_k(k, 1, Z - 1);
  const double n = Z - 1.0;
  const double pa = ((k - 1.0) * e.aa + (Z - k) * e.ab) / n;
  const double pb = (k * e.ba + (Z - k - 1.0) * e.bb) / n;
  return {pa, pb};
}

StepProbabilities step_probabilities(int k, const PairEntries& e, int Z, double beta) {
  check_k(k, 0, Z);
  if (k == 0 || k == Z) return {0.0, 0.0};
  const auto [pa, pb] = group_payoffs(k, e, Z);
  const double mix = (static_cast<double>(Z - k) / Z) * (static_cast<double>(k) / Z);
  // A B player copies an A player (k grows), or the other way round.
  return {mix * fermi_probability(pb, pa, beta), mix * fermi_probability(pa, pb, beta)};
}

double log_fixation_probability(const PairEntries& e, const EvolutionParameters& evo) {
  const int Z = evo.Z();
  const double beta = evo.beta();
  // T-(j)/T+(j) = exp(-beta (Pi_A(j) - Pi_B(j))), so the products in the
  // series are exponentials of running sums.
  std::vector<double> log_terms(static_cast<std::size_t>(Z - 1));
  double running = 0.0;
  for (int j = 1; j < Z; ++j) {
    const auto [pa, pb] = group_payoffs(j, e, Z);
    running -= beta * (pa - pb);
    log_terms[static_cast<std::size_t>(j - 1)] = running;
  }
  const double shift = std::max(0.0, *std::max_element(log_terms.begin(), log_terms.end()));
  double sum = std::exp(-shift);
  for (double t : log_terms) sum += std::exp(t - shift);
  return -(shift + std::log(sum));
}

double fixation_probability(const PairEntries& e, const EvolutionParameters& evo) {
  return std::exp(log_fixation_probability(e, evo));
}

double fixation_probability(Strategy invader, Strategy resident, const PayoffMatrix& payoffs,
                            const EvolutionParameters& evo) {
  return fixation_probability(pair_entries(payoffs, payoffs.index_of(invader), payoffs.index_of(resident)),
                              evo);
}

MarkovChain build_transition_matrix(const PayoffMatrix& payoffs, const EvolutionParameters& evo) {
  const auto n = static_cast<Eigen::Index>(payoffs.size());
  if (n < 2) throw ValidationError("strategies", "need at least two strategies");
  const auto inf = std::numeric_limits<double>::infinity();
  MarkovChain chain{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Constant(n, n, -inf)};
  const double log_choice = std::log(static_cast<double>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    double leave = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double log_rho = log_fixation_probability(
          pair_entries(payoffs, static_cast<std::size_t>(j), static_cast<std::size_t>(i)), evo);
      chain.fixation(i, j) = std::exp(log_rho);
      chain.log_rates(i, j) = log_rho - log_choice;
      chain.transition(i, j) = chain.fixation(i, j) / static_cast<double>(n - 1);
      leave += chain.transition(i, j);
    }
    chain.transition(i, i) = 1.0 - leave;
  }
  return chain;
}

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

// GTH state reduction, in log space.
Eigen::VectorXd stationary_from_log_rates(const Eigen::MatrixXd& log_rates) {
  const Eigen::Index n = log_rates.rows();
  if (n == 0 || log_rates.cols() != n) throw ValidationError("transition", "matrix must be square and non-empty");
  if (n == 1) return Eigen::VectorXd::Ones(1);
  const double ninf = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd a = log_rates;
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    double out = ninf;
    for (Eigen::Index j = 0; j < k; ++j) out = log_add(out, a(k, j));
    if (out == ninf) throw ValidationError("transition", "chain is reducible, no unique stationary distribution");
    for (Eigen::Index i = 0; i < k; ++i) a(i, k) -= out;
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        if (i != j) a(i, j) = log_add(a(i, j), a(i, k) + a(k, j));
      }
    }
  }
  Eigen::VectorXd log_pi(n);
  log_pi(0) = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    double acc = ninf;
    for (Eigen::Index i = 0; i < j; ++i) acc = log_add(acc, log_pi(i) + a(i, j));
    log_pi(j) = acc;
  }
  const double top = log_pi.maxCoeff();
  Eigen::VectorXd pi = (log_pi.array() - top).exp();
  return pi / pi.sum();
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& M) {
  const Eigen::Index n = M.rows();
  if (n == 0 || M.cols() != n) throw ValidationError("transition", "matrix must be square and non-empty");
  Eigen::MatrixXd log_rates = Eigen::MatrixXd::Constant(n, n, -std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = M(i, j);
      if (!std::isfinite(x) || x < -1e-12 || x > 1.0 + 1e-12) {
        throw ValidationError("transition", "entries must be probabilities");
      }
      row += x;
      if (i != j && x > 0.0) log_rates(i, j) = std::log(x);
    }
    if (std::abs(row - 1.0) > 1e-9) throw ValidationError("transition", "rows must sum to 1");
  }
  return stationary_from_log_rates(log_rates);
}

bool risk_dominant(Strategy a, Strategy b, const PayoffMatrix& payoffs) {
  const std::size_t ia = payoffs.index_of(a), ib = payoffs.index_of(b);
  return payoffs.at(ia, ia) + payoffs.at(ia, ib) > payoffs.at(ib, ia) + payoffs.at(ib, ib);
}

EvolutionResult strategy_frequency(const PayoffMatrix& payoffs, const EvolutionParameters& evo) {
  MarkovChain chain = build_transition_matrix(payoffs, evo);
  Eigen::VectorXd stationary = stationary_from_log_rates(chain.log_rates);
  return {payoffs, std::move(chain.fixation), std::move(chain.transition), std::move(stationary)};
}

EvolutionResult strategy_frequency(std::span<const Strategy> strategies, const RaceParameters& race,
                                   const IncentiveSet& incentives, const EvolutionParameters& evo) {
  return strategy_frequency(build_payoff_matrix(strategies, race, incentives), evo);
}

}  // namespace dsair
