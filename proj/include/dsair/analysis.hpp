#ifndef DSAIR_ANALYSIS_HPP
#define DSAIR_ANALYSIS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsair/evolution.hpp"
#include "dsair/race_model.hpp"

namespace dsair {

// I: safety preferred and selected. II: safety preferred but unsafe play
// selected (IIa/IIb when a punisher is, or is not, risk-dominant over AU).
// III: unsafe play preferred and selected.
enum class Region { I, II, IIa, IIb, III };

std::string_view to_string(Region r);

// Large-prize boundaries in the (s, p_r) plane.
double safety_preference_threshold(double s);  // 1 - 1/s
double safety_dominance_threshold(double s);   // 1 - 1/(3s)

// Boundary points belong to the closed region II.
Region classify_region(double s, double p_r);
// As above, with II split by punishment_threshold(s, W, s_alpha).
Region classify_region(double s, double p_r, double W, double s_alpha);

// p_r above which PS (with s_alpha = s_beta) is risk-dominant over AU for a
// large prize. The race lasts r = (W - s_alpha)/(s - s_alpha) rounds; for
// s_alpha >= s neither player advances and the threshold is 1 - 1/s.
double punishment_threshold(double s, double W, double s_alpha);

// p_r above which RS is risk-dominant over AU for a large prize, floored at 0.
double reward_threshold(double s, double s_alpha, double s_beta);

// Smallest p_r in [0, 1] at which the exact risk-dominance comparison of A
// over B changes outcome, located to within `tolerance`. The p_r field of
// `race` is ignored. Returns nullopt when the outcome never changes.
std::optional<double> dominance_switch_point(Strategy a, Strategy b, const RaceInputs& race,
                                             const IncentiveSet& incentives, double tolerance = 1e-10);

enum class Axis { s, p_r, s_alpha, s_beta };
std::string_view to_string(Axis a);
Axis parse_axis(std::string_view name);

struct AxisRange {
  Axis axis = Axis::s;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  // Evenly spaced, endpoints included. A single step requires min == max.
  std::vector<double> values() const;
  double spacing() const { return steps > 1 ? (max - min) / (steps - 1) : 0.0; }
};

enum class Metric { AuFrequency, StrategyFrequencies, RiskDominance };
std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

struct SweepSpec {
  std::vector<Strategy> strategies;
  RaceInputs race;
  // Used by PS and RS alike unless overridden by an axis.
  double s_alpha = 0.0;
  double s_beta = 0.0;
  int Z = 100;
  double beta = 0.01;
  AxisRange x{Axis::s, 1.05, 4.0, 51};
  AxisRange y{Axis::p_r, 0.0, 1.0, 51};
  Metric metric = Metric::AuFrequency;
  // Pair compared by Metric::RiskDominance.
  std::pair<Strategy, Strategy> dominance{Strategy::AS, Strategy::AU};

  void validate() const;
};

struct SweepCell {
  std::size_t ix = 0;
  std::size_t iy = 0;
  double x = 0.0;
  double y = 0.0;
  std::optional<Region> region;
  // One value, or one per strategy for Metric::StrategyFrequencies. For
  // Metric::RiskDominance: +1 if the first strategy dominates, -1 if the
  // second does, 0 on a tie.
  std::vector<double> values;
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

struct SweepResult {
  SweepSpec spec;
  std::vector<double> xs;
  std::vector<double> ys;
  // Row-major in x: index ix * ys.size() + iy.
  std::vector<SweepCell> cells;

  const SweepCell& at(std::size_t ix, std::size_t iy) const { return cells.at(ix * ys.size() + iy); }
};

// Cells are independent; `threads` = 0 picks the hardware concurrency. The
// result does not depend on the thread count.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 1);

// The value of every swept or fixed quantity at one grid point.
struct CellParameters {
  RaceInputs race;
  double s_alpha;
  double s_beta;
};
CellParameters cell_parameters(const SweepSpec& spec, double x, double y);

struct ThresholdCurve {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (s, p_r)
};

// Boundary curves over s in [s_min, s_max]. The punishment curve is included
// when `punishment_s_alpha` is set, the reward curve when `reward` is set.
std::vector<ThresholdCurve> threshold_curves(double s_min, double s_max, int samples, double W,
                                             std::optional<double> punishment_s_alpha = std::nullopt,
                                             std::optional<std::pair<double, double>> reward = std::nullopt);

}  // namespace dsair

#endif  // DSAIR_ANALYSIS_HPP
