#ifndef DSAIR_RACE_MODEL_HPP
#define DSAIR_RACE_MODEL_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsair/errors.hpp"

// Payoff algebra of the two-team development race: per-round market shares,
// race-averaged pairwise payoffs for every strategy pairing the model
// defines, and the welfare comparison between all-safe and all-unsafe
// populations.
namespace dsair {

enum class Strategy { AS, AU, CS, PS, RS };

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::AS, Strategy::AU, Strategy::CS, Strategy::PS, Strategy::RS};

std::string_view to_string(Strategy s);
// Throws ValidationError("strategies", ...) on an unknown tag.
Strategy parse_strategy(std::string_view tag);
// Comma separated list, e.g. "AS,AU,PS". Duplicates are rejected.
std::vector<Strategy> parse_strategy_list(std::string_view list);
std::string join_strategies(std::span<const Strategy> strategies);

// Raw race constants. Use RaceParameters to obtain a validated instance.
struct RaceInputs {
  double b = 4.0;      // per-round market benefit
  double c = 1.0;      // per-round cost of playing SAFE
  double s = 1.5;      // speed of UNSAFE play (SAFE speed is 1)
  double W = 100.0;    // mean number of rounds, i.e. distance to the target
  double B = 1.0e4;    // prize for reaching the target first
  double p_r = 0.5;    // disaster probability for an unsafe winner
  double p_fo = 0.0;   // per-round detection probability of UNSAFE play

  bool operator==(const RaceInputs&) const = default;
};

// W = 1/(1 - omega) for a continuation probability omega in [0, 1).
double rounds_from_continuation(double omega);

class RaceParameters {
 public:
  // Throws ValidationError naming the first violated field.
  explicit RaceParameters(const RaceInputs& inputs);

  double b() const noexcept { return in_.b; }
  double c() const noexcept { return in_.c; }
  double s() const noexcept { return in_.s; }
  double W() const noexcept { return in_.W; }
  double B() const noexcept { return in_.B; }
  double p_r() const noexcept { return in_.p_r; }
  double p_fo() const noexcept { return in_.p_fo; }
  // Probability that an unsafe winner keeps its gains.
  double p() const noexcept { return 1.0 - in_.p_r; }
  const RaceInputs& inputs() const noexcept { return in_; }

 private:
  RaceInputs in_;
};

enum class IncentiveKind { Punishment, Reward };

std::string_view to_string(IncentiveKind kind);

class IncentiveParameters {
 public:
  IncentiveParameters(double s_alpha, double s_beta, IncentiveKind kind);

  double s_alpha() const noexcept { return s_alpha_; }
  double s_beta() const noexcept { return s_beta_; }
  IncentiveKind kind() const noexcept { return kind_; }

 private:
  double s_alpha_;
  double s_beta_;
  IncentiveKind kind_;
};

// The incentives available to PS and RS players in a population. A strategy
// set containing PS (RS) requires `punishment` (`reward`).
struct IncentiveSet {
  std::optional<IncentiveParameters> punishment;
  std::optional<IncentiveParameters> reward;

  static IncentiveSet none() { return {}; }
  // Same cost/effect pair for both punishers and rewarders.
  static IncentiveSet symmetric(double s_alpha, double s_beta);
};

// Speeds in a PS-vs-AU race from round two onwards.
struct EffectiveSpeeds {
  double s_prime;         // punisher: 1 - s_alpha
  double s_double_prime;  // punished unsafe player: s - s_beta
};

EffectiveSpeeds effective_speeds(const RaceParameters& race, const IncentiveParameters& punishment);

struct PairwisePayoff {
  double row;
  double col;

  bool operator==(const PairwisePayoff&) const = default;
};

// Per-round payoffs, indexed [row action][column action] with SAFE = 0 and
// UNSAFE = 1.
using RoundMatrix = std::array<std::array<double, 2>, 2>;
inline constexpr std::size_t kSafe = 0;
inline constexpr std::size_t kUnsafe = 1;

RoundMatrix round_payoff_matrix(const RaceParameters& race);

// Race-averaged payoffs between the unconditional strategies AS and AU.
PairwisePayoff baseline_pair_payoffs(Strategy row, Strategy col, const RaceParameters& race);

// Payoffs among AS, AU and the conditionally safe CS (SAFE first, then copy
// the co-player's previous move).
PairwisePayoff cs_pair_payoffs(Strategy row, Strategy col, const RaceParameters& race);

// PS (row) against AU (column) for arbitrary speed cost/effect. Round one is
// played at speeds (1, s); afterwards the punisher moves at s' and the
// punished player at s''. A team whose speed is non-positive never reaches
// the target and earns no market share. When neither can ever finish the
// race never ends and the payoffs are the per-round limits (-c, 0).
PairwisePayoff ps_au_pair_payoffs(const RaceParameters& race, const IncentiveParameters& punishment);

// Payoffs among AS, AU and the rewarding RS.
PairwisePayoff reward_pair_payoffs(Strategy row, Strategy col, const RaceParameters& race,
                                   const IncentiveParameters& reward);

// Dispatches any pairing the model defines. PS and RS behave like AS towards
// every strategy except the one their incentive targets.
PairwisePayoff pairwise_payoff(Strategy row, Strategy col, const RaceParameters& race,
                               const IncentiveSet& incentives);

class PayoffMatrix {
 public:
  PayoffMatrix(std::vector<Strategy> strategies, std::vector<double> entries);

  std::size_t size() const noexcept { return strategies_.size(); }
  const std::vector<Strategy>& strategies() const noexcept { return strategies_; }
  // Payoff of strategies()[i] against strategies()[j].
  double at(std::size_t i, std::size_t j) const { return entries_.at(i * size() + j); }
  double at(Strategy row, Strategy col) const { return at(index_of(row), index_of(col)); }
  std::size_t index_of(Strategy s) const;
  bool contains(Strategy s) const noexcept;

 private:
  std::vector<Strategy> strategies_;
  std::vector<double> entries_;
};

PayoffMatrix build_payoff_matrix(std::span<const Strategy> strategies, const RaceParameters& race,
                                 const IncentiveSet& incentives);

enum class Preference { Safe, Unsafe, Indifferent };

struct WelfareComparison {
  double safe_payoff;     // AS against AS
  double unsafe_payoff;   // AU against AU
  Preference preferred;
  // p_r above which the all-safe population earns more.
  double p_r_threshold;
};

WelfareComparison welfare_compare(const RaceParameters& race);

}  // namespace dsair

#endif  // DSAIR_RACE_MODEL_HPP
