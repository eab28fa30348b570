#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gwmb/analytic.hpp"
#include "gwmb/sim.hpp"

#include <cmath>

using namespace gwmb;

namespace {

using OD = OffspringDistribution;

GameConfig config(std::uint64_t trials, Starter starter = Starter::Breaker,
                  GameRegime regime = GameRegime::NoInfo, std::uint64_t seed = 20240601) {
  GameConfig c;
  c.trials = trials;
  c.starter = starter;
  c.regime = regime;
  c.master_seed = seed;
  return c;
}

bool covers(const SimEstimate& e, double v) { return e.ci_lo <= v && v <= e.ci_hi; }

// Two estimates of the same quantity overlap within their 95% intervals.
bool agree(const SimEstimate& a, const SimEstimate& b) {
  return std::abs(a.p_hat - b.p_hat) <= (a.ci_hi - a.ci_lo) / 2 + (b.ci_hi - b.ci_lo) / 2;
}

}  // namespace

TEST_CASE("wilson interval") {
  const Interval half = wilson_interval(50, 100);
  CHECK(std::abs(half.lo - 0.40383) < 1e-4);
  CHECK(std::abs(half.hi - 0.59617) < 1e-4);
  const Interval none = wilson_interval(0, 1000);
  CHECK(none.lo == 0.0);
  CHECK(none.hi > 0.0);
  const Interval all = wilson_interval(1000, 1000);
  CHECK(all.hi == 1.0);
  CHECK(all.lo < 1.0);
}

TEST_CASE("thresholds") {
  // skip-free: rho^M < 1e-6
  const auto skip = to_increment(OD::poisson(1.5), -1);
  const int m = default_threshold(skip, 1);
  CHECK(std::pow(0.417188, m) < 1e-6);
  CHECK(std::pow(0.417188, m - 1) >= 1e-6);
  // never below start + 1
  CHECK(default_threshold(to_increment(OD::finite({0.0, 0.0, 0.0, 1.0}), -2), 2) == 3);
  CHECK_THROWS(default_threshold(to_increment(OD::poisson(1.5), -2), 1));
}

TEST_CASE("walk simulation: reference values") {
  const SimEstimate g = simulate_walk_hit(to_increment(OD::geometric_n(0.3), -2), 1, config(1'000'000));
  CHECK(covers(g, 3.0 / 7.0));
  CHECK(g.bias_bound < 1e-5);
  CHECK(g.undecided == 0);
  CHECK(g.ci_lo <= g.p_hat);
  CHECK(g.p_hat <= g.ci_hi);

  const SimEstimate p = simulate_walk_hit(to_increment(OD::poisson(3.0), -2), 2, config(1'000'000));
  CHECK(covers(p, 0.14967));
  CHECK(covers(p, solve_empty(OD::poisson(3.0)).p_bar));
  CHECK(p.bias_bound < 1e-5);

  const SimEstimate up = simulate_walk_hit(to_increment(OD::finite({0.0, 0.0, 0.0, 1.0}), -2), 1,
                                           config(10'000));
  CHECK(up.successes == 0);
  CHECK(up.p_hat == 0.0);
  CHECK(up.undecided == 0);

  CHECK_THROWS(simulate_walk_hit(to_increment(OD::poisson(3.0), -2), 3, config(10)));
  CHECK_THROWS(simulate_walk_hit(to_increment(OD::poisson(3.0), -2), 1, config(0)));
}

TEST_CASE("simulation is deterministic across worker counts") {
  const auto inc = to_increment(OD::poisson(3.0), -2);
  GameConfig a = config(50'000);
  a.threads = 1;
  GameConfig b = a;
  b.threads = 4;
  const SimEstimate x = simulate_walk_hit(inc, 1, a);
  const SimEstimate y = simulate_walk_hit(inc, 1, b);
  CHECK(x.successes == y.successes);
  CHECK(x.exits_at_minus_one == y.exits_at_minus_one);
  CHECK(x.p_hat == y.p_hat);

  a.regime = b.regime = GameRegime::SizeInfo;
  const SimEstimate s = simulate_game(OD::binomial(3, 0.8), a);
  const SimEstimate t = simulate_game(OD::binomial(3, 0.8), b);
  CHECK(s.successes == t.successes);

  GameConfig c = a;
  c.master_seed = 7;
  CHECK(simulate_game(OD::binomial(3, 0.8), c).successes != s.successes);
}

TEST_CASE("game simulation: reference values") {
  const SimEstimate e = simulate_game(OD::finite({0.0, 0.2, 0.3, 0.5}), config(500'000));
  CHECK(covers(e, 0.4));
  CHECK(e.undecided == 0);

  // conditional Breaker-start probability g'(q) / (p_3 (1 - q)^2) for Bin(3, r)
  const double r = 0.8;
  double q = 0.0;
  for (int i = 0; i < 10000; ++i) q = std::pow(1.0 - r + r * q, 3);
  const double expect = 3.0 * r * std::pow(1.0 - r + r * q, 2) / (r * r * r * (1.0 - q) * (1.0 - q));
  const SimEstimate s =
      simulate_game(OD::binomial(3, r), config(500'000, Starter::Breaker, GameRegime::SizeInfo));
  CHECK(covers(s, expect));
  CHECK(std::abs(solve_size_info(OD::binomial(3, r)).p_conditional - expect) < 1e-9);
  const SimEstimate u = unconditional(s, q);
  CHECK(covers(u, q + (1.0 - q) * expect));
  CHECK(u.ci_lo <= u.p_hat);
  CHECK(u.p_hat <= u.ci_hi);

  CHECK_THROWS(simulate_game(OD::poisson(3.0), config(10, Starter::Breaker, GameRegime::FullInfoDepth)));
}

TEST_CASE("size and no information coincide without leaves") {
  for (const auto& d : {OD::geometric_n(0.3), OD::one_or_many(4, 0.8)}) {
    CAPTURE(d.describe());
    for (Starter st : {Starter::Breaker, Starter::Maker}) {
      const SimEstimate none = simulate_game(d, config(200'000, st, GameRegime::NoInfo, 11));
      const SimEstimate size = simulate_game(d, config(200'000, st, GameRegime::SizeInfo, 12));
      CHECK(agree(none, size));
    }
  }
}

TEST_CASE("walk and game agree without information") {
  for (const auto& d : {OD::poisson(3.0), OD::geometric_n(0.3), OD::geometric_n0(0.2),
                        OD::binomial(3, 0.9), OD::binomial(13, 0.25), OD::finite({0.1, 0.1, 0.2, 0.6})}) {
    CAPTURE(d.describe());
    const auto inc = to_increment(d, -2);
    for (Starter st : {Starter::Breaker, Starter::Maker}) {
      const int start = st == Starter::Breaker ? 1 : 2;
      const SimEstimate walk = simulate_walk_hit(inc, start, config(200'000, st, GameRegime::NoInfo, 21));
      const SimEstimate game = simulate_game(d, config(200'000, st, GameRegime::NoInfo, 22));
      CHECK(agree(walk, game));
      CHECK(game.bias_bound < 1e-5);
    }
  }
}

TEST_CASE("depth iteration") {
  const auto b = OD::binomial(3, 0.5);
  CHECK(depth_iterate_p(b, 0) == 0.0);
  CHECK(std::abs(depth_iterate_p(b, 1) - 0.5) < 1e-15);
  CHECK(std::abs(depth_iterate_p(OD::poisson(2.0), 1) - 3.0 * std::exp(-2.0)) < 1e-15);
  const auto p4 = OD::poisson(4.0);
  CHECK(std::abs(depth_iterate_p(p4, 40) - solve_full_info(p4).p_unconditional) < 1e-6);
  double prev = 0.0;
  for (int D = 0; D <= 30; ++D) {
    const double v = depth_iterate_p(p4, D);
    CHECK(v >= prev);
    prev = v;
  }
  // below criticality the iteration climbs to 1
  CHECK(depth_iterate_p(OD::poisson(3.0), 2000) > 1 - 1e-3);
  CHECK_THROWS(depth_iterate_p(b, -1));
}

TEST_CASE("binary subtree estimates") {
  const SimEstimate one = estimate_binary_subtree_prob(OD::binomial(3, 0.5), 1, config(200'000));
  CHECK(covers(one, 0.5));
  const auto g = OD::geometric_n(0.2);
  const SimEstimate six = estimate_binary_subtree_prob(g, 6, config(200'000));
  CHECK(covers(six, depth_iterate_p(g, 6)));
  const auto p = OD::poisson(3.5);
  const SimEstimate twelve = estimate_binary_subtree_prob(p, 12, config(100'000));
  CHECK(covers(twelve, depth_iterate_p(p, 12)));
  CHECK(estimate_binary_subtree_prob(p, 0, config(1000)).successes == 0);
  CHECK_THROWS(estimate_binary_subtree_prob(p, 13, config(10)));
}
