#include "dsair/race_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace dsair {

namespace {

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

bool finite(double x) { return std::isfinite(x); }

// Finishing times are compared after summing ~W/s increments, so an exact
// tie can be off by a few ulps.
bool same_time(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

bool is_baseline(Strategy s) { return s == Strategy::AS || s == Strategy::AU; }

[[noreturn]] void unsupported(Strategy row, Strategy col) {
  std::ostringstream os;
  os << "no payoff defined for " << to_string(row) << " against " << to_string(col);
  throw UnsupportedPairError(os.str());
}

const IncentiveParameters& need(const std::optional<IncentiveParameters>& inc, Strategy who) {
  if (!inc) {
    throw ValidationError("incentive", std::string(to_string(who)) + " requires " +
                                           (who == Strategy::PS ? "punishment" : "reward") +
                                           " parameters");
  }
  return *inc;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::AS: return "AS";
    case Strategy::AU: return "AU";
    case Strategy::CS: return "CS";
    case Strategy::PS: return "PS";
    case Strategy::RS: return "RS";
  }
  return "?";
}

Strategy parse_strategy(std::string_view tag) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == tag) return s;
  }
  throw ValidationError("strategies", "unknown strategy '" + std::string(tag) + "'");
}

std::vector<Strategy> parse_strategy_list(std::string_view list) {
  std::vector<Strategy> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    std::string_view tag = list.substr(pos, comma - pos);
    while (!tag.empty() && tag.front() == ' ') tag.remove_prefix(1);
    while (!tag.empty() && tag.back() == ' ') tag.remove_suffix(1);
    Strategy s = parse_strategy(tag);
    if (std::find(out.begin(), out.end(), s) != out.end()) {
      throw ValidationError("strategies", "duplicate strategy '" + std::string(tag) + "'");
    }
    out.push_back(s);
    pos = comma + 1;
  }
  return out;
}

std::string join_strategies(std::span<const Strategy> strategies) {
  std::string out;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (i) out += ',';
    out += to_string(strategies[i]);
  }
  return out;
}

double rounds_from_continuation(double omega) {
  require(finite(omega) && omega >= 0.0 && omega < 1.0, "omega", "must lie in [0, 1)");
  return 1.0 / (1.0 - omega);
}

RaceParameters::RaceParameters(const RaceInputs& in) : in_(in) {
  require(finite(in.b) && in.b >= 0.0, "b", "must be a non-negative number");
  require(finite(in.c) && in.c >= 0.0, "c", "must be a non-negative number");
  require(finite(in.s) && in.s > 1.0, "s", "must be greater than 1");
  require(finite(in.W) && in.W >= 1.0, "W", "must be at least 1");
  require(finite(in.B) && in.B > 0.0, "B", "must be positive");
  require(finite(in.p_r) && in.p_r >= 0.0 && in.p_r <= 1.0, "p_r", "must lie in [0, 1]");
  require(finite(in.p_fo) && in.p_fo >= 0.0 && in.p_fo <= 1.0, "p_fo", "must lie in [0, 1]");
}

std::string_view to_string(IncentiveKind kind) {
  return kind == IncentiveKind::Punishment ? "punishment" : "reward";
}

IncentiveParameters::IncentiveParameters(double s_alpha, double s_beta, IncentiveKind kind)
    : s_alpha_(s_alpha), s_beta_(s_beta), kind_(kind) {
  require(finite(s_alpha) && s_alpha >= 0.0, "s_alpha", "must be a non-negative number");
  require(finite(s_beta) && s_beta >= 0.0, "s_beta", "must be a non-negative number");
}

IncentiveSet IncentiveSet::symmetric(double s_alpha, double s_beta) {
  return {IncentiveParameters(s_alpha, s_beta, IncentiveKind::Punishment),
          IncentiveParameters(s_alpha, s_beta, IncentiveKind::Reward)};
}

EffectiveSpeeds effective_speeds(const RaceParameters& race, const IncentiveParameters& punishment) {
  return {1.0 - punishment.s_alpha(), race.s() - punishment.s_beta()};
}

RoundMatrix round_payoff_matrix(const RaceParameters& race) {
  const double b = race.b(), c = race.c(), s = race.s();
  return {{{-c + b / 2.0, -c + b / (s + 1.0)}, {s * b / (s + 1.0), b / 2.0}}};
}

PairwisePayoff baseline_pair_payoffs(Strategy row, Strategy col, const RaceParameters& race) {
  if (!is_baseline(row) || !is_baseline(col)) unsupported(row, col);
  const RoundMatrix pi = round_payoff_matrix(race);
  const double B = race.B(), W = race.W(), s = race.s(), p = race.p();
  const double safe_safe = B / (2.0 * W) + pi[kSafe][kSafe];
  const double unsafe_unsafe = p * (s * B / (2.0 * W) + pi[kUnsafe][kUnsafe]);
  const double safe_vs_unsafe = pi[kSafe][kUnsafe];
  const double unsafe_vs_safe = p * (s * B / W + pi[kUnsafe][kSafe]);

  if (row == Strategy::AS && col == Strategy::AS) return {safe_safe, safe_safe};
  if (row == Strategy::AU && col == Strategy::AU) return {unsafe_unsafe, unsafe_unsafe};
  if (row == Strategy::AS) return {safe_vs_unsafe, unsafe_vs_safe};
  return {unsafe_vs_safe, safe_vs_unsafe};
}

PairwisePayoff cs_pair_payoffs(Strategy row, Strategy col, const RaceParameters& race) {
  auto allowed = [](Strategy x) { return is_baseline(x) || x == Strategy::CS; };
  if (!allowed(row) || !allowed(col)) unsupported(row, col);
  if (row != Strategy::CS && col != Strategy::CS) return baseline_pair_payoffs(row, col, race);

  const RoundMatrix pi = round_payoff_matrix(race);
  const double B = race.B(), W = race.W(), s = race.s(), p = race.p();
  const double safe_safe = B / (2.0 * W) + pi[kSafe][kSafe];
  // CS plays SAFE once and then copies AU for the remaining W/s - 1 rounds.
  const double tail = (W / s - 1.0) * pi[kUnsafe][kUnsafe];
  const double cs_vs_au = (s / W) * (pi[kSafe][kUnsafe] + tail);
  const double au_vs_cs = p * (s * B / W + (s / W) * (pi[kUnsafe][kSafe] + tail));

  const Strategy other = row == Strategy::CS ? col : row;
  if (other != Strategy::AU) return {safe_safe, safe_safe};
  return row == Strategy::CS ? PairwisePayoff{cs_vs_au, au_vs_cs} : PairwisePayoff{au_vs_cs, cs_vs_au};
}

PairwisePayoff ps_au_pair_payoffs(const RaceParameters& race, const IncentiveParameters& punishment) {
  if (punishment.kind() != IncentiveKind::Punishment) {
    throw ValidationError("incentive", "PS against AU needs punishment parameters");
  }
  const RoundMatrix pi = round_payoff_matrix(race);
  const auto [ps_speed, au_speed] = effective_speeds(race, punishment);
  const double b = race.b(), c = race.c(), W = race.W(), B = race.B();
  const double p_fo = race.p_fo();
  const bool ps_moves = ps_speed > 0.0;
  const bool au_moves = au_speed > 0.0;

  if (!ps_moves && !au_moves) return {-c, 0.0};

  // Rounds needed after the first one; a stalled team never arrives.
  constexpr double kNever = std::numeric_limits<double>::infinity();
  const double ps_rest = ps_moves ? (W - 1.0) / ps_speed : kNever;
  const double au_rest = au_moves ? (W - race.s()) / au_speed : kNever;
  const bool tie = ps_moves && au_moves && same_time(ps_rest, au_rest);
  const bool ps_wins = !tie && ps_rest < au_rest;
  const bool au_wins = !tie && au_rest < ps_rest;

  const double rounds = 1.0 + std::min(ps_rest, au_rest);
  const double ps_prize = ps_wins ? B : (tie ? B / 2.0 : 0.0);
  const double au_prize = au_wins ? B : (tie ? B / 2.0 : 0.0);

  double ps_share = 0.0;
  double au_share = 0.0;
  if (ps_moves && au_moves) {
    // A detected unsafe player forfeits its share to the punisher.
    ps_share = (1.0 - p_fo) * ps_speed * b / (ps_speed + au_speed) + p_fo * b;
    au_share = (1.0 - p_fo) * au_speed * b / (ps_speed + au_speed);
  } else if (ps_moves) {
    ps_share = b;
  } else {
    au_share = (1.0 - p_fo) * b;
  }
  const double keep = (au_moves && (au_wins || tie)) ? race.p() : 1.0;

  const double ps = (pi[kSafe][kUnsafe] + ps_prize + (rounds - 1.0) * (-c + ps_share)) / rounds;
  const double au = keep * (pi[kUnsafe][kSafe] + au_prize + (rounds - 1.0) * au_share) / rounds;
  return {ps, au};
}

PairwisePayoff reward_pair_payoffs(Strategy row, Strategy col, const RaceParameters& race,
                                   const IncentiveParameters& reward) {
  if (reward.kind() != IncentiveKind::Reward) {
    throw ValidationError("incentive", "RS payoffs need reward parameters");
  }
  auto allowed = [](Strategy x) { return is_baseline(x) || x == Strategy::RS; };
  if (!allowed(row) || !allowed(col)) unsupported(row, col);
  if (row != Strategy::RS && col != Strategy::RS) return baseline_pair_payoffs(row, col, race);

  const RoundMatrix pi = round_payoff_matrix(race);
  const double B = race.B(), W = race.W(), s = race.s(), p = race.p();
  const double sa = reward.s_alpha(), sb = reward.s_beta();

  const double as_vs_rs = B * (1.0 + sb) / W + pi[kSafe][kSafe];
  const double rs_vs_as = pi[kSafe][kSafe];
  const double rs_vs_au = pi[kSafe][kUnsafe];
  const double au_vs_rs = p * (s * B / W + pi[kUnsafe][kSafe]);
  // Two rewarders only ever finish when the net speed 1 + s_beta - s_alpha is positive.
  const double rs_vs_rs = (1.0 + sb > sa) ? B * (1.0 + sb - sa) / (2.0 * W) + pi[kSafe][kSafe]
                                          : pi[kSafe][kSafe];

  if (row == Strategy::RS && col == Strategy::RS) return {rs_vs_rs, rs_vs_rs};
  if (row == Strategy::RS) {
    return col == Strategy::AS ? PairwisePayoff{rs_vs_as, as_vs_rs} : PairwisePayoff{rs_vs_au, au_vs_rs};
  }
  return row == Strategy::AS ? PairwisePayoff{as_vs_rs, rs_vs_as} : PairwisePayoff{au_vs_rs, rs_vs_au};
}

PairwisePayoff pairwise_payoff(Strategy row, Strategy col, const RaceParameters& race,
                               const IncentiveSet& incentives) {
  if (row == Strategy::CS || col == Strategy::CS) return cs_pair_payoffs(row, col, race);
  if (is_baseline(row) && is_baseline(col)) return baseline_pair_payoffs(row, col, race);

  // Punishers act as AS towards everyone but AU.
  if (row == Strategy::PS || col == Strategy::PS) {
    const Strategy other = row == Strategy::PS ? col : row;
    if (other == Strategy::AU) {
      const PairwisePayoff pp = ps_au_pair_payoffs(race, need(incentives.punishment, Strategy::PS));
      return row == Strategy::PS ? pp : PairwisePayoff{pp.col, pp.row};
    }
    const Strategy as_row = row == Strategy::PS ? Strategy::AS : row;
    const Strategy as_col = col == Strategy::PS ? Strategy::AS : col;
    if (as_row == Strategy::RS || as_col == Strategy::RS) {
      return reward_pair_payoffs(as_row, as_col, race, need(incentives.reward, Strategy::RS));
    }
    return baseline_pair_payoffs(as_row, as_col, race);
  }
  return reward_pair_payoffs(row, col, race, need(incentives.reward, Strategy::RS));
}

PayoffMatrix::PayoffMatrix(std::vector<Strategy> strategies, std::vector<double> entries)
    : strategies_(std::move(strategies)), entries_(std::move(entries)) {
  if (entries_.size() != strategies_.size() * strategies_.size()) {
    throw ValidationError("payoffs", "entry count does not match the strategy list");
  }
  for (double x : entries_) {
    if (!finite(x)) throw ValidationError("payoffs", "entries must be finite");
  }
}

std::size_t PayoffMatrix::index_of(Strategy s) const {
  auto it = std::find(strategies_.begin(), strategies_.end(), s);
  if (it == strategies_.end()) {
    throw ValidationError("strategies", std::string(to_string(s)) + " is not in the payoff matrix");
  }
  return static_cast<std::size_t>(it - strategies_.begin());
}

bool PayoffMatrix::contains(Strategy s) const noexcept {
  return std::find(strategies_.begin(), strategies_.end(), s) != strategies_.end();
}

PayoffMatrix build_payoff_matrix(std::span<const Strategy> strategies, const RaceParameters& race,
                                 const IncentiveSet& incentives) {
  const std::size_t n = strategies.size();
  std::vector<double> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      entries[i * n + j] = pairwise_payoff(strategies[i], strategies[j], race, incentives).row;
    }
  }
  return PayoffMatrix({strategies.begin(), strategies.end()}, std::move(entries));
}

WelfareComparison welfare_compare(const RaceParameters& race) {
  const RoundMatrix pi = round_payoff_matrix(race);
  const double B = race.B(), W = race.W(), s = race.s();
  WelfareComparison out{};
  out.safe_payoff = baseline_pair_payoffs(Strategy::AS, Strategy::AS, race).row;
  out.unsafe_payoff = baseline_pair_payoffs(Strategy::AU, Strategy::AU, race).row;
  out.preferred = out.safe_payoff > out.unsafe_payoff   ? Preference::Safe
                  : out.safe_payoff < out.unsafe_payoff ? Preference::Unsafe
                                                        : Preference::Indifferent;
  out.p_r_threshold =
      1.0 - (B + 2.0 * W * pi[kSafe][kSafe]) / (s * B + 2.0 * W * pi[kUnsafe][kUnsafe]);
  return out;
}

}  // namespace dsair
