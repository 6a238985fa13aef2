#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "dsair/abm.hpp"

using namespace dsair;

namespace {

SimulationConfig base(std::vector<Strategy> set, double p_r) {
  SimulationConfig cfg;
  cfg.strategies = std::move(set);
  cfg.race.p_r = p_r;
  cfg.incentives = IncentiveSet::symmetric(1, 1);
  return cfg;
}

double l1(const SimulationOutcome& out, const EvolutionResult& ref) {
  double d = 0;
  for (std::size_t i = 0; i < out.strategies.size(); ++i) {
    d += std::abs(out.frequencies[i] - ref.frequency(out.strategies[i]));
  }
  return d;
}

}  // namespace

TEST_CASE("uniform draws") {
  Rng rng(42);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));

  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[uniform_index(rng, 7)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  CHECK(uniform_index(rng, 1) == 0);
}

TEST_CASE("known engine output") {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng rng;
  rng.discard(9999);
  CHECK(rng() == 9981545732273789042ull);
}

TEST_CASE("agent payoffs use the rest of the population") {
  const std::vector<Strategy> set{Strategy::AS, Strategy::AU};
  RaceInputs in;
  in.p_r = 0.6;
  const auto m = build_payoff_matrix(set, RaceParameters(in), IncentiveSet::none());
  Rng rng(3);
  ImitationProcess proc(m, 100, 0.01, 0.0, rng);
  const auto& c = proc.counts();
  CHECK(c[0] + c[1] == 100);
  const double k = c[0];
  CHECK(proc.payoff(0) == doctest::Approx(((k - 1) * m.at(0, 0) + (100 - k) * m.at(0, 1)) / 99));
  CHECK(proc.payoff(1) == doctest::Approx((k * m.at(1, 0) + (100 - k - 1) * m.at(1, 1)) / 99));
}

TEST_CASE("without exploration the population ends monomorphic and stays there") {
  const std::vector<Strategy> set{Strategy::AS, Strategy::AU};
  RaceInputs in;
  in.p_r = 0.5;
  const auto m = build_payoff_matrix(set, RaceParameters(in), IncentiveSet::none());
  Rng rng(8);
  ImitationProcess proc(m, 30, 0.5, 0.0, rng);
  int t = 0;
  while (!proc.monomorphic() && t < 10'000'000) {
    proc.step(rng);
    ++t;
  }
  REQUIRE(proc.monomorphic());
  const auto end = *proc.monomorphic();
  for (int i = 0; i < 100000; ++i) proc.step(rng);
  REQUIRE(proc.monomorphic());
  CHECK(*proc.monomorphic() == end);
}

TEST_CASE("config validation") {
  auto cfg = base({Strategy::AS, Strategy::AU}, 0.5);
  cfg.mu = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("absorbed"), ValidationError);
  cfg.mu = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.mu = 1e-3;
  cfg.steps = 100;
  cfg.burn_in = 100;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.burn_in.reset();
  CHECK(cfg.resolved_burn_in() == 10);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("neutral drift spends equal time in both strategies") {
  auto cfg = base({Strategy::AS, Strategy::AU}, 0.5);
  cfg.beta = 0.0;
  cfg.mu = 0.01;
  cfg.steps = 1'000'000;
  const auto out = run_simulation(cfg);
  CHECK(out.frequencies[0] == doctest::Approx(0.5).epsilon(0.04));
  CHECK(out.frequencies[1] == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("frequencies sum to one and runs reproduce") {
  auto cfg = base({Strategy::AS, Strategy::AU, Strategy::PS}, 0.6);
  cfg.steps = 200'000;
  const auto a = run_simulation(cfg);
  const auto b = run_simulation(cfg);
  CHECK(std::accumulate(a.frequencies.begin(), a.frequencies.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.frequencies == b.frequencies);
  CHECK(a.monomorphic_visits == b.monomorphic_visits);
  CHECK(a.burn_in == 20'000);
  CHECK(a.seed == 1);
  cfg.seed = 2;
  const auto c = run_simulation(cfg);
  CHECK(c.frequencies != a.frequencies);
  CHECK(std::abs(c.frequencies[1] - a.frequencies[1]) < 0.1);
}

TEST_CASE("agrees with the small-mutation chain in region II") {
  auto cfg = base({Strategy::AS, Strategy::AU}, 0.5);
  const auto out = run_simulation(cfg);
  const auto ref = strategy_frequency(cfg.strategies, RaceParameters(cfg.race), cfg.incentives,
                                      EvolutionParameters(cfg.Z, cfg.beta));
  CHECK(l1(out, ref) <= 0.05);
}

TEST_CASE("unsupported sets propagate") {
  auto cfg = base({Strategy::CS, Strategy::PS}, 0.5);
  cfg.steps = 1000;
  CHECK_THROWS_AS(run_simulation(cfg), UnsupportedPairError);
}
