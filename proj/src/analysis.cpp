#include "dsair/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace dsair {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::IIa: return "IIa";
    case Region::IIb: return "IIb";
    case Region::III: return "III";
  }
  return "?";
}

double safety_preference_threshold(double s) { return 1.0 - 1.0 / s; }

double safety_dominance_threshold(double s) { return 1.0 - 1.0 / (3.0 * s); }

Region classify_region(double s, double p_r) {
  if (p_r > safety_dominance_threshold(s)) return Region::I;
  if (p_r < safety_preference_threshold(s)) return Region::III;
  return Region::II;
}

Region classify_region(double s, double p_r, double W, double s_alpha) {
  const Region base = classify_region(s, p_r);
  if (base != Region::II) return base;
  return p_r > punishment_threshold(s, W, s_alpha) ? Region::IIa : Region::IIb;
}

double punishment_threshold(double s, double W, double s_alpha) {
  if (s_alpha >= s) return 1.0 - 1.0 / s;
  const double r = (W - s_alpha) / (s - s_alpha);
  return 1.0 - 1.0 / (s + 2.0 * W / r);
}

double reward_threshold(double s, double s_alpha, double s_beta) {
  return std::max(0.0, 1.0 - (1.0 + s_beta - s_alpha) / (3.0 * s));
}

std::optional<double> dominance_switch_point(Strategy a, Strategy b, const RaceInputs& race,
                                             const IncentiveSet& incentives, double tolerance) {
  const std::vector<Strategy> pair{a, b};
  auto dominant = [&](double p_r) {
    RaceInputs in = race;
    in.p_r = p_r;
    return risk_dominant(a, b, build_payoff_matrix(pair, RaceParameters(in), incentives));
  };

  constexpr int kScan = 2000;
  bool prev = dominant(0.0);
  for (int i = 1; i <= kScan; ++i) {
    double hi = static_cast<double>(i) / kScan;
    if (dominant(hi) == prev) continue;
    double lo = static_cast<double>(i - 1) / kScan;
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      (dominant(mid) == prev ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::s: return "s";
    case Axis::p_r: return "p_r";
    case Axis::s_alpha: return "s_alpha";
    case Axis::s_beta: return "s_beta";
  }
  return "?";
}

Axis parse_axis(std::string_view name) {
  for (Axis a : {Axis::s, Axis::p_r, Axis::s_alpha, Axis::s_beta}) {
    if (to_string(a) == name) return a;
  }
  if (name == "pr") return Axis::p_r;
  throw ValidationError("sweep.axis", "unknown axis '" + std::string(name) + "'");
}

std::vector<double> AxisRange::values() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(steps, 0)));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = i + 1 == steps ? max : min + i * spacing();
  }
  return out;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::AuFrequency: return "au_frequency";
    case Metric::StrategyFrequencies: return "strategy_frequencies";
    case Metric::RiskDominance: return "risk_dominance";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::AuFrequency, Metric::StrategyFrequencies, Metric::RiskDominance}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("sweep.metric", "unknown metric '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (x.axis == y.axis) throw ValidationError("sweep.axis", "the two axes must differ");
  for (const AxisRange* a : {&x, &y}) {
    if (!std::isfinite(a->min) || !std::isfinite(a->max) || a->max < a->min) {
      throw ValidationError("sweep.range", "axis " + std::string(to_string(a->axis)) + " needs finite min <= max");
    }
    if (a->steps < 1 || (a->steps == 1 && a->min != a->max)) {
      throw ValidationError("sweep.steps", "axis " + std::string(to_string(a->axis)) +
                                               " needs at least 2 steps, or 1 step with min == max");
    }
  }
  if (strategies.size() < 2) throw ValidationError("strategies", "need at least two strategies");
  const bool has_au = std::find(strategies.begin(), strategies.end(), Strategy::AU) != strategies.end();
  if (metric == Metric::AuFrequency && !has_au) {
    throw ValidationError("sweep.metric", "au_frequency needs AU in the strategy set");
  }
  [[maybe_unused]] const EvolutionParameters evo(Z, beta);
}

CellParameters cell_parameters(const SweepSpec& spec, double x, double y) {
  CellParameters out{spec.race, spec.s_alpha, spec.s_beta};
  auto assign = [&](Axis axis, double v) {
    switch (axis) {
      case Axis::s: out.race.s = v; break;
      case Axis::p_r: out.race.p_r = v; break;
      case Axis::s_alpha: out.s_alpha = v; break;
      case Axis::s_beta: out.s_beta = v; break;
    }
  };
  assign(spec.x.axis, x);
  assign(spec.y.axis, y);
  return out;
}

namespace {

bool contains(const std::vector<Strategy>& set, Strategy s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

void evaluate(const SweepSpec& spec, SweepCell& cell) {
  try {
    const CellParameters p = cell_parameters(spec, cell.x, cell.y);
    const RaceParameters race(p.race);
    const IncentiveSet incentives = IncentiveSet::symmetric(p.s_alpha, p.s_beta);
    const bool split = contains(spec.strategies, Strategy::PS) && p.s_alpha == p.s_beta;
    cell.region = split ? classify_region(race.s(), race.p_r(), race.W(), p.s_alpha)
                        : classify_region(race.s(), race.p_r());

    if (spec.metric == Metric::RiskDominance) {
      const auto [a, b] = spec.dominance;
      const std::vector<Strategy> pair{a, b};
      const PayoffMatrix m = build_payoff_matrix(pair, race, incentives);
      cell.values = {risk_dominant(a, b, m) ? 1.0 : risk_dominant(b, a, m) ? -1.0 : 0.0};
      return;
    }
    const EvolutionResult r =
        strategy_frequency(spec.strategies, race, incentives, EvolutionParameters(spec.Z, spec.beta));
    if (spec.metric == Metric::AuFrequency) {
      cell.values = {r.frequency(Strategy::AU)};
    } else {
      cell.values.assign(r.stationary.data(), r.stationary.data() + r.stationary.size());
    }
  } catch (const std::exception& e) {
    cell.values.clear();
    cell.error = e.what();
  }
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  SweepResult result{spec, spec.x.values(), spec.y.values(), {}};
  const std::size_t ny = result.ys.size();
  result.cells.resize(result.xs.size() * ny);
  for (std::size_t ix = 0; ix < result.xs.size(); ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      SweepCell& c = result.cells[ix * ny + iy];
      c.ix = ix;
      c.iy = iy;
      c.x = result.xs[ix];
      c.y = result.ys[iy];
    }
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, result.cells.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++) evaluate(spec, result.cells[i]);
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return result;
}

std::vector<ThresholdCurve> threshold_curves(double s_min, double s_max, int samples, double W,
                                             std::optional<double> punishment_s_alpha,
                                             std::optional<std::pair<double, double>> reward) {
  const AxisRange grid{Axis::s, s_min, s_max, std::max(samples, 2)};
  std::vector<ThresholdCurve> curves{{"welfare", {}}, {"risk_dominance", {}}};
  if (punishment_s_alpha) curves.push_back({"punishment", {}});
  if (reward) curves.push_back({"reward", {}});
  for (double s : grid.values()) {
    curves[0].points.emplace_back(s, safety_preference_threshold(s));
    curves[1].points.emplace_back(s, safety_dominance_threshold(s));
    std::size_t k = 2;
    if (punishment_s_alpha) curves[k++].points.emplace_back(s, punishment_threshold(s, W, *punishment_s_alpha));
    if (reward) curves[k].points.emplace_back(s, reward_threshold(s, reward->first, reward->second));
  }
  return curves;
}

}  // namespace dsair
