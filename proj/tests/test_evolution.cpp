#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <random>

#include "dsair/evolution.hpp"
#include "oracles/oracles.hpp"

using namespace dsair;

namespace {

RaceParameters fig2(double p_r, double s = 1.5) {
  RaceInputs in;
  in.p_r = p_r;
  in.s = s;
  return RaceParameters(in);
}

const std::vector<Strategy> kASAU{Strategy::AS, Strategy::AU};
const std::vector<Strategy> kASAUCS{Strategy::AS, Strategy::AU, Strategy::CS};

PayoffMatrix random_matrix(std::mt19937_64& gen, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Strategy> s(kAllStrategies.begin(), kAllStrategies.begin() + static_cast<long>(n));
  std::vector<double> e(n * n);
  for (double& x : e) x = u(gen);
  return PayoffMatrix(s, e);
}

}  // namespace

TEST_CASE("fermi") {
  CHECK(fermi_probability(3, 3, 0.7) == 0.5);
  CHECK(fermi_probability(-8, 40, 0) == 0.5);
  const double hi = fermi_probability(0, 100, 1);
  CHECK(hi == doctest::Approx(1 - std::exp(-100) / (1 + std::exp(-100))));
  CHECK(hi <= 1.0);
  const double lo = fermi_probability(1e6, 0, 1);
  CHECK(lo > 0.0);
  CHECK(std::isfinite(lo));
}

TEST_CASE("group payoffs") {
  const PairEntries e{1, 2, 3, 4};
  auto [a, b] = group_payoffs(1, e, 2);
  CHECK(a == 2.0);
  CHECK(b == 3.0);
  auto [x, y] = group_payoffs(17, {5, 5, 5, 5}, 40);
  CHECK(x == doctest::Approx(5));
  CHECK(y == doctest::Approx(5));
  CHECK_THROWS_AS(group_payoffs(0, e, 10), DomainError);
  CHECK_THROWS_AS(group_payoffs(10, e, 10), DomainError);

  const auto m = build_payoff_matrix(kASAU, fig2(0.6), IncentiveSet::none());
  const PairEntries f = pair_entries(m, 0, 1);
  for (int k : {1, 2, 50, 98, 99}) {
    const auto got = group_payoffs(k, f, 100);
    const auto want = oracle::enumerate_group_payoffs(k, f.aa, f.ab, f.ba, f.bb, 100);
    CHECK(got.first == doctest::Approx(want.first).epsilon(1e-12));
    CHECK(got.second == doctest::Approx(want.second).epsilon(1e-12));
  }
}

TEST_CASE("step probabilities") {
  const PairEntries e{1, 0.6, 60.96, 34};
  for (int k = 1; k < 100; ++k) {
    const auto n = step_probabilities(k, e, 100, 0.0);
    CHECK(n.t_plus == doctest::Approx(k * (100.0 - k) / (2 * 1e4)));
    CHECK(n.t_minus == n.t_plus);
    const auto t = step_probabilities(k, e, 100, 0.05);
    const auto [pa, pb] = group_payoffs(k, e, 100);
    CHECK(t.t_minus / t.t_plus == doctest::Approx(std::exp(-0.05 * (pa - pb))).epsilon(1e-10));
  }
  const auto edge = step_probabilities(100, e, 100, 0.05);
  CHECK(edge.t_plus == 0.0);
  CHECK(edge.t_minus == 0.0);
  CHECK_THROWS_AS(step_probabilities(101, e, 100, 0.05), DomainError);
}

TEST_CASE("neutral fixation is 1/Z") {
  const EvolutionParameters neutral(100, 0.0);
  CHECK(std::abs(fixation_probability(PairEntries{1, 7, -3, 2}, neutral) - 0.01) <= 1e-12);
  const EvolutionParameters sel(100, 3.0);
  CHECK(std::abs(fixation_probability(PairEntries{4, 4, 4, 4}, sel) - 0.01) <= 1e-12);
  for (int Z : {2, 3, 17, 500}) {
    CHECK(std::abs(fixation_probability(PairEntries{1, 2, 3, 4}, EvolutionParameters(Z, 0)) - 1.0 / Z) <= 1e-12);
  }
}

TEST_CASE("two-player fixation") {
  const PairEntries e{1, 2.5, 0.5, 4};
  const double beta = 0.3;
  const double want = 1.0 / (1.0 + std::exp(-beta * (e.ab - e.ba)));
  CHECK(fixation_probability(e, EvolutionParameters(2, beta)) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("log-space fixation equals the naive product") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 400; ++i) {
    const PairEntries e{u(gen), u(gen), u(gen), u(gen)};
    const int Z = 2 + static_cast<int>(gen() % 150);
    const double beta = std::abs(u(gen)) / 5;
    const double naive = oracle::naive_fixation(e.aa, e.ab, e.ba, e.bb, Z, beta);
    if (!std::isfinite(naive) || naive < 1e-250) continue;
    CHECK(fixation_probability(e, EvolutionParameters(Z, beta)) == doctest::Approx(naive).epsilon(1e-10));
  }
}

TEST_CASE("fixation does not overflow under strong selection") {
  const PairEntries e{0, -100, 100, 0};
  const double rho = fixation_probability(e, EvolutionParameters(100, 1.0));
  CHECK(std::isfinite(rho));
  CHECK(rho >= 0.0);
  CHECK(rho < 1e-300);
  const double win = fixation_probability(PairEntries{0, 100, -100, 0}, EvolutionParameters(100, 1.0));
  CHECK(win == doctest::Approx(1.0));
}

TEST_CASE("region I direction at p_r = 0.9") {
  const auto m = build_payoff_matrix(kASAU, fig2(0.9), IncentiveSet::none());
  const EvolutionParameters evo(100, 0.01);
  const double as_into_au = fixation_probability(Strategy::AS, Strategy::AU, m, evo);
  const double au_into_as = fixation_probability(Strategy::AU, Strategy::AS, m, evo);
  CHECK(as_into_au > au_into_as);
}

TEST_CASE("transition matrix") {
  const auto m = build_payoff_matrix(kASAUCS, fig2(0.6), IncentiveSet::none());
  const auto chain = build_transition_matrix(m, EvolutionParameters(100, 0.0));
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      if (i != j) CHECK(chain.transition(i, j) == doctest::Approx(0.005).epsilon(1e-12));
    }
  }

  std::mt19937_64 gen(5);
  for (int t = 0; t < 50; ++t) {
    const auto r = random_matrix(gen, 2 + t % 4, 50);
    const auto c = build_transition_matrix(r, EvolutionParameters(60, 0.05));
    for (Eigen::Index i = 0; i < c.transition.rows(); ++i) {
      CHECK(std::abs(c.transition.row(i).sum() - 1.0) <= 1e-12);
      for (Eigen::Index j = 0; j < c.transition.cols(); ++j) {
        CHECK(c.transition(i, j) >= 0.0);
        CHECK(c.transition(i, j) <= 1.0);
      }
    }
  }

  const std::vector<Strategy> one{Strategy::AS};
  CHECK_THROWS_AS(build_transition_matrix(build_payoff_matrix(one, fig2(0.5), IncentiveSet::none()),
                                          EvolutionParameters(100, 0.01)),
                  ValidationError);
}

TEST_CASE("two-state stationary distribution by hand") {
  const auto m = build_payoff_matrix(kASAU, fig2(0.7), IncentiveSet::none());
  const EvolutionParameters evo(100, 0.01);
  const auto res = strategy_frequency(m, evo);
  const double to_au = fixation_probability(Strategy::AU, Strategy::AS, m, evo);
  const double to_as = fixation_probability(Strategy::AS, Strategy::AU, m, evo);
  CHECK(res.frequency(Strategy::AS) == doctest::Approx(to_as / (to_as + to_au)).epsilon(1e-12));
}

TEST_CASE("two-state chain with rates far below epsilon") {
  const auto m = build_payoff_matrix(kASAU, fig2(0.77), IncentiveSet::none());
  const EvolutionParameters evo(100, 0.1);
  const auto res = strategy_frequency(m, evo);
  const double to_au = fixation_probability(Strategy::AU, Strategy::AS, m, evo);
  const double to_as = fixation_probability(Strategy::AS, Strategy::AU, m, evo);
  REQUIRE(to_au < 1e-15);
  CHECK(res.frequency(Strategy::AU) == doctest::Approx(to_au / (to_as + to_au)).epsilon(1e-10));
  CHECK(res.frequency(Strategy::AU) > 0.99);

  Eigen::MatrixXd tiny(3, 3);
  tiny << 1 - 3e-30, 1e-30, 2e-30, 4e-25, 1 - 5e-25, 1e-25, 1e-20, 1e-20, 1 - 2e-20;
  const Eigen::VectorXd v = stationary_distribution(tiny);
  const Eigen::VectorXd w = oracle::power_iteration(tiny, 400);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(v(i) == doctest::Approx(w(i)).epsilon(1e-8));
}

TEST_CASE("stationary distribution") {
  Eigen::MatrixXd sym(2, 2);
  sym << 0.7, 0.3, 0.3, 0.7;
  const auto pi = stationary_distribution(sym);
  CHECK(pi(0) == doctest::Approx(0.5));
  CHECK(pi(1) == doctest::Approx(0.5));

  Eigen::MatrixXd bad(2, 2);
  bad << 0.7, 0.4, 0.3, 0.7;
  CHECK_THROWS_AS(stationary_distribution(bad), ValidationError);
  CHECK_THROWS_AS(stationary_distribution(Eigen::MatrixXd::Identity(2, 3)), ValidationError);
  CHECK_THROWS_AS(stationary_distribution(Eigen::MatrixXd::Identity(3, 3)), ValidationError);

  std::mt19937_64 gen(9);
  for (int t = 0; t < 40; ++t) {
    const auto r = random_matrix(gen, 2 + t % 4, 20);
    const auto c = build_transition_matrix(r, EvolutionParameters(50, 0.05));
    const Eigen::VectorXd v = stationary_distribution(c.transition);
    const Eigen::VectorXd w = oracle::power_iteration(c.transition);
    CHECK(std::abs(v.sum() - 1.0) <= 1e-12);
    CHECK((v.transpose() * c.transition - v.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(v.minCoeff() >= 0.0);
    CHECK((v - w).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("stationary distribution under strong selection") {
  std::mt19937_64 gen(21);
  int compared = 0;
  for (int t = 0; t < 200; ++t) {
    const auto r = random_matrix(gen, 2 + t % 4, t % 2 ? 100 : 30);
    const auto c = build_transition_matrix(r, EvolutionParameters(100, 0.2));
    const Eigen::VectorXd from_logs = stationary_from_log_rates(c.log_rates);
    // Slowing every transition by e^-1000 leaves the stationary vector alone.
    const Eigen::MatrixXd slower = (c.log_rates.array() - 1000.0).matrix();
    CHECK((stationary_from_log_rates(slower) - from_logs).cwiseAbs().maxCoeff() <= 1e-12);
    bool representable = true;
    for (Eigen::Index i = 0; i < c.transition.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.transition.cols(); ++j) {
        if (i != j && c.transition(i, j) == 0.0) representable = false;
      }
    }
    if (!representable) continue;
    const Eigen::VectorXd v = stationary_distribution(c.transition);
    const Eigen::VectorXd w = oracle::power_iteration(c.transition, 1100);
    CHECK((v - w).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((from_logs - w).cwiseAbs().maxCoeff() <= 1e-8);
    ++compared;
  }
  CHECK(compared > 50);
}

TEST_CASE("stationary distribution follows a permutation of the strategies") {
  const auto r = fig2(0.6);
  const auto inc = IncentiveSet::symmetric(1, 1);
  const std::vector<Strategy> a{Strategy::AS, Strategy::AU, Strategy::PS, Strategy::RS};
  const std::vector<Strategy> b{Strategy::RS, Strategy::PS, Strategy::AU, Strategy::AS};
  const EvolutionParameters evo(100, 0.01);
  const auto x = strategy_frequency(a, r, inc, evo);
  const auto y = strategy_frequency(b, r, inc, evo);
  for (Strategy s : a) CHECK(x.frequency(s) == doctest::Approx(y.frequency(s)).epsilon(1e-10));
}

TEST_CASE("risk dominance") {
  RaceInputs in;
  in.p_r = 0.8;
  in.B = 1e8;
  auto m = build_payoff_matrix(kASAU, RaceParameters(in), IncentiveSet::none());
  CHECK(risk_dominant(Strategy::AS, Strategy::AU, m));
  in.p_r = 0.0;
  m = build_payoff_matrix(kASAU, RaceParameters(in), IncentiveSet::none());
  CHECK_FALSE(risk_dominant(Strategy::AS, Strategy::AU, m));
  CHECK_FALSE(risk_dominant(Strategy::AS, Strategy::AS, m));
}

TEST_CASE("strategy frequency") {
  const EvolutionParameters evo(100, 0.01);
  CHECK(strategy_frequency(kASAU, fig2(0.9), IncentiveSet::none(), evo).frequency(Strategy::AU) < 0.1);
  CHECK(strategy_frequency(kASAU, fig2(0.5), IncentiveSet::none(), evo).frequency(Strategy::AU) > 0.9);
  const auto flat = strategy_frequency(kASAUCS, fig2(0.5), IncentiveSet::none(), EvolutionParameters(100, 0));
  for (Strategy s : kASAUCS) CHECK(flat.frequency(s) == doctest::Approx(1.0 / 3));

  const auto ii = strategy_frequency(kASAUCS, fig2(0.6), IncentiveSet::none(), EvolutionParameters(100, 0.1));
  CHECK(ii.frequency(Strategy::AU) > 0.9);
  const auto i = strategy_frequency(kASAUCS, fig2(0.9), IncentiveSet::none(), EvolutionParameters(100, 0.1));
  CHECK(i.frequency(Strategy::AS) + i.frequency(Strategy::CS) > 0.9);
}

TEST_CASE("AU frequency does not rise with p_r") {
  const EvolutionParameters evo(100, 0.01);
  double prev = 2.0;
  for (int i = 0; i <= 50; ++i) {
    const double f = strategy_frequency(kASAU, fig2(i / 50.0), IncentiveSet::none(), evo).frequency(Strategy::AU);
    CHECK(f <= prev + 1e-12);
    prev = f;
  }
}

TEST_CASE("fixation direction agrees with risk dominance away from the boundary") {
  const EvolutionParameters evo(100, 0.01);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double s = 1.05 + (4.0 - 1.05) * i / 19.0;
      const double p_r = j / 19.0;
      if (std::abs(p_r - (1 - 1 / (3 * s))) < 0.05) continue;
      const auto m = build_payoff_matrix(kASAU, fig2(p_r, s), IncentiveSet::none());
      const bool dom = risk_dominant(Strategy::AS, Strategy::AU, m);
      const double as_in = fixation_probability(Strategy::AS, Strategy::AU, m, evo);
      const double au_in = fixation_probability(Strategy::AU, Strategy::AS, m, evo);
      CHECK(dom == (as_in > au_in));
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("neutral fixation is fast") {
  const auto t0 = std::chrono::steady_clock::now();
  const double rho = fixation_probability(PairEntries{1, 2, 3, 4}, EvolutionParameters(100, 0));
  const auto dt = std::chrono::steady_clock::now() - t0;
  CHECK(rho == doctest::Approx(0.01));
  CHECK(dt < std::chrono::milliseconds(1));
}
