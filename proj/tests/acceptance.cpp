// Acceptance suite. Prints one PASS/FAIL line per criterion; detail lines
// start with two spaces. Exit status is the number of failed criteria.

#include "gwmb/analytic.hpp"
#include "gwmb/distribution.hpp"
#include "gwmb/sim.hpp"
#include "gwmb/tree.hpp"
#include "gwmb/walk.hpp"
#include "walk_oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace gwmb;

namespace {

using OD = OffspringDistribution;
using Clock = std::chrono::steady_clock;

const double kSqrt13 = std::sqrt(13.0);

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects comparisons; only failing ones are printed.
class Checker {
 public:
  bool ok = true;

  void near(const std::string& what, double got, double want, double tol) {
    const bool pass = std::abs(got - want) <= tol;
    if (!pass) {
      ok = false;
      std::printf("  mismatch %s: got %.12g want %.12g tol %.1e\n", what.c_str(), got, want, tol);
    }
  }
  void that(const std::string& what, bool cond) {
    if (!cond) {
      ok = false;
      std::printf("  violated %s\n", what.c_str());
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------

bool c1_full_geometric() {
  Checker c;
  const auto t0 = Clock::now();
  for (int i = 1; i <= 5; ++i) {
    const double s = 0.05 * i;
    const RegimeSolution r = solve_full_info(OD::geometric_n(s));
    const double p = (1.0 - std::sqrt(1.0 - 4.0 * s)) / (2.0 * (1.0 - s));
    c.near(fmt("p(s=%.2f)", s), r.p_unconditional, p, 1e-10);
    c.near(fmt("p_bar(s=%.2f)", s), r.p_bar, p - s / (1.0 - s), 1e-10);
  }
  const double t = seconds_since(t0);
  std::printf("  runtime %.3f s (limit 1 s)\n", t);
  c.that("runtime < 1 s", t < 1.0);
  return c.ok;
}

bool c2_poisson_critical() {
  Checker c;
  const CriticalPoint cp =
      critical_parameter(ParametricFamily{ParametricFamily::Kind::Poisson, 0}, Regime::FullInfo, 3.0, 4.0);
  std::printf("  lambda_c %.12g, p_c %.12g\n", cp.param_c, cp.p_at_critical);
  c.near("lambda_c", cp.param_c, 3.3509188715, 1e-7);
  c.near("p_c", cp.p_at_critical, 0.46483869, 1e-6);
  return c.ok;
}

bool c3_binomial_table() {
  Checker c;
  // n, r_c, p_c as printed (four decimals for n >= 4)
  const double table[][3] = {{4, 0.7248, 0.2584}, {5, 0.6028, 0.3105}, {6, 0.5137, 0.3418},
                             {7, 0.4468, 0.3625}, {8, 0.3949, 0.3773}, {9, 0.3537, 0.3883},
                             {10, 0.3202, 0.3969}};
  const CriticalPoint three = critical_parameter(ParametricFamily::parse("binomial:3"),
                                                 Regime::FullInfo, 0.0, 1.0);
  std::printf("  n=3  r_c %.12g  p_c %.12g\n", three.param_c, three.p_at_critical);
  // the bisection resolves r only to its 1e-9 parameter tolerance
  c.near("r_c(3)", three.param_c, 8.0 / 9.0, 1e-8);
  c.near("p_c(3)", three.p_at_critical, 5.0 / 32.0, 1e-8);
  c.near("p at r=8/9", solve_full_info(OD::binomial(3, 8.0 / 9.0)).p_unconditional, 5.0 / 32.0, 1e-12);
  for (const auto& row : table) {
    const int n = static_cast<int>(row[0]);
    const CriticalPoint cp = critical_parameter(
        ParametricFamily::parse("binomial:" + std::to_string(n)), Regime::FullInfo, 0.0, 1.0);
    std::printf("  n=%-2d r_c %.12g  p_c %.12g\n", n, cp.param_c, cp.p_at_critical);
    c.near("r_c(" + std::to_string(n) + ")", cp.param_c, row[1], 5e-5);
    c.near("p_c(" + std::to_string(n) + ")", cp.p_at_critical, row[2], 5e-5);
  }
  return c.ok;
}

bool c4_dekking() {
  Checker c;
  struct Case {
    const char* family;
    DekkingSide side;
    double lo, hi, quoted, tol;
  };
  // tolerance is half a unit in the last quoted digit; e is quoted exactly
  const Case cases[] = {
      {"geo-n", DekkingSide::MakerChance, 0.05, 0.5, 0.21332, 5e-6},
      {"geo-n", DekkingSide::BreakerSure, 0.05, 0.9, 0.29629, 5e-6},
      {"geo-n0", DekkingSide::MakerChance, 0.02, 0.5, 0.16401, 5e-6},
      {"geo-n0", DekkingSide::BreakerSure, 0.02, 0.9, 0.22857, 5e-6},
      {"poisson", DekkingSide::MakerChance, 2.5, 6.0, 3.654328, 5e-7},
      {"poisson", DekkingSide::BreakerSure, 1.0, 5.0, std::exp(1.0), 1e-9},
  };
  for (const Case& k : cases) {
    const double b = dekking_boundary(ParametricFamily::parse(k.family), k.side, k.lo, k.hi);
    const std::string name = std::string(k.family) +
                             (k.side == DekkingSide::MakerChance ? " maker-chance" : " breaker-sure");
    std::printf("  %-22s boundary %.10f quoted %.10g\n", name.c_str(), b, k.quoted);
    c.near(name, b, k.quoted, k.tol);
  }
  return c.ok;
}

bool c5_no_info_closed_forms() {
  Checker c;
  for (int i = 2; i <= 9; ++i) {
    const double s = 0.05 * i;
    const RegimeSolution r = solve_empty(OD::geometric_n(s));
    c.near(fmt("p(s=%.2f)", s), r.p_unconditional, s / (1.0 - s), 1e-10);
  }
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int drawn = 0;
  while (drawn < 20) {
    double a = u(rng), b = u(rng), d = u(rng);
    const double sum = a + b + d;
    a /= sum;
    b /= sum;
    d /= sum;
    if (!(a < d)) continue;
    ++drawn;
    const RegimeSolution r = solve_empty(OD::finite({0.0, a, b, d}));
    c.near(fmt("p_1/p_3 (p_1=%.4f)", a), r.p_unconditional, a / d, 1e-10);
  }
  return c.ok;
}

bool c6_separable() {
  Checker c;
  const SeparableSolution p = separable_solution(OD::poisson(3.0));
  const auto xi = truncate(OD::poisson(3.0)).weights;
  std::printf("  poisson:3  p %.12g  p_bar %.12g  (exact walk iteration %.12g, %.12g)\n", p.p,
              p.p_bar, gwmb::testing::exact_exit_probability(xi, 1),
              gwmb::testing::exact_exit_probability(xi, 2));
  c.near("poisson:3 p", p.p, 0.31699, 1e-5);
  c.near("poisson:3 p_bar", p.p_bar, 0.14967, 1e-5);

  const SeparableSolution g = separable_solution(OD::geometric_n0(0.25));
  std::printf("  geo-n0:0.25  p %.12g  p_bar %.12g\n", g.p, g.p_bar);
  c.near("geo-n0 p", g.p, 2.0 / 3.0, 1e-10);
  c.near("geo-n0 p_bar", g.p_bar, 5.0 / 9.0, 1e-10);
  c.near("rho", g.walk.rho, (1.0 + kSqrt13) / 6.0, 1e-9);
  c.near("sigma", g.walk.sigma, (kSqrt13 - 3.0) / 4.0, 1e-9);
  c.near("theta", g.walk.theta, (5.0 - kSqrt13) / 4.0, 1e-9);
  c.near("rho_odd", g.walk.rho_odd, (13.0 - kSqrt13) / 12.0, 1e-9);
  c.near("theta_odd", g.walk.theta_odd, (5.0 + kSqrt13) / 12.0, 1e-9);
  return c.ok;
}

bool c7_walk_identities() {
  Checker c;
  const auto laws = gwmb::testing::half_battery();
  c.that("battery has 30 laws", laws.size() == 30);
  int bracketed = 0;
  for (const auto& x : laws) {
    const std::string n = x.describe();
    const IncrementDistribution inc = to_increment(x, -1);
    const WalkQuantities w = conditioned_quantities(inc);
    const double pi = pmf(x, 0);
    c.near(n + " (a)", w.pi_minus1 + w.theta + w.sigma, 1.0, 1e-10);
    c.near(n + " (b) sigma", w.sigma, pi * (1.0 - w.rho) / w.rho, 1e-10);
    c.near(n + " (b) theta", w.theta, 1.0 - pi / w.rho, 1e-10);
    c.near(n + " (c)", inc.gamma(w.rho * (1.0 - 2.0 * w.rho_odd)), -1.0, 1e-9);
    c.near(n + " (d)", w.theta_theta_odd,
           pi * (1.0 - w.rho_odd) / (w.rho * (2.0 * w.rho_odd - 1.0)), 1e-9);
    if (!x.finite_support()) continue;
    const double lo = w.rho - 1e-7, up = w.rho + 1e-7;
    c.that(n + " certified rho enclosure", pgf(x, lo) > lo && pgf(x, up) < up);
    const auto b = gwmb::testing::enumerate_paths(truncate(x).weights, lo, up, 18);
    const double e = 1e-12;
    c.that(n + " rho in bracket", b.rho_lo - e <= w.rho && w.rho <= b.rho_hi + e);
    c.that(n + " rho*rho_odd in bracket",
           b.rho_odd_lo - e <= w.rho * w.rho_odd && w.rho * w.rho_odd <= b.rho_odd_hi + e);
    c.that(n + " sigma in bracket", b.sigma_lo - e <= w.sigma && w.sigma <= b.sigma_hi + e);
    c.that(n + " theta in bracket", b.theta_lo - e <= w.theta && w.theta <= b.theta_hi + e);
    c.that(n + " theta*theta_odd in bracket",
           b.theta_odd_lo - e <= w.theta_theta_odd && w.theta_theta_odd <= b.theta_odd_hi + e);
    ++bracketed;
  }
  std::printf("  %zu laws, %d with path-enumeration brackets (18 steps)\n", laws.size(), bracketed);
  return c.ok;
}

bool c8_two_root_vs_separable() {
  Checker c;
  std::vector<OD> laws;
  for (int i = 22; i <= 40; ++i) laws.push_back(OD::poisson(0.1 * i));
  for (int i = 0; i <= 8; ++i) laws.push_back(OD::geometric_n0(0.1 + 0.025 * i));
  double worst = 0.0;
  for (const auto& d : laws) {
    const SeparableSolution s = separable_solution(d);
    const TwoBoundarySolution t = two_boundary_hit(d, 1);
    c.near(d.describe() + " p", t.h1, s.p, 1e-8);
    c.near(d.describe() + " p_bar", t.h2, s.p_bar, 1e-8);
    worst = std::max({worst, std::abs(t.h1 - s.p), std::abs(t.h2 - s.p_bar)});
  }
  std::printf("  %zu laws, largest difference %.3g\n", laws.size(), worst);
  return c.ok;
}

bool c9_coupling() {
  Checker c;
  const BoundsReport r = bounds_by_coupling(OD::binomial(13, 0.25), Regime::NoInfo);
  const CouplingInterval& k = *r.coupling;
  std::printf("  p in (%.10f, %.10f) from %s / %s\n", k.p_lo, k.p_hi, k.lower_law.c_str(),
              k.upper_law.c_str());
  std::printf("  p_bar in (%.10f, %.10f)\n", k.p_bar_lo, k.p_bar_hi);
  std::printf("  exact walk iteration for binomial:12,0.25 from 1: %.10f\n",
              gwmb::testing::exact_exit_probability(truncate(OD::binomial(12, 0.25)).weights, 1));
  c.near("p lower", k.p_lo, 0.1367, 5e-5);
  c.near("p upper", k.p_hi, 0.2482, 5e-5);
  c.near("p_bar lower", k.p_bar_lo, 0.0383, 5e-5);
  c.near("p_bar upper", k.p_bar_hi, 0.0957, 5e-5);
  return c.ok;
}

bool c10_size_info() {
  Checker c;
  for (int i = 70; i <= 99; ++i) {
    const double r = 0.01 * i;
    const double w = std::sqrt(r * (4.0 - 3.0 * r));
    const double p = 6.0 * r * (2.0 - r - w) / ((3.0 * r - w) * (3.0 * r - w));
    c.near(fmt("p(r=%.2f)", r), solve_size_info(OD::binomial(3, r)).p_conditional, p, 1e-9);
  }
  for (double r : {0.0, 0.1, 0.3, 0.5, 0.6, 0.66, 2.0 / 3.0}) {
    const RegimeSolution s = solve_size_info(OD::binomial(3, r));
    c.that(fmt("p = 1 at r=%.4f", r), s.p_conditional == 1.0 && s.p_unconditional == 1.0);
  }
  for (const auto& d : {OD::geometric_n(0.3), OD::one_or_many(4, 0.8), OD::finite({0.0, 0.2, 0.3, 0.5}),
                        OD::finite({0.0, 0.0, 1.0}), OD::finite({0.0, 0.0, 0.0, 1.0}), OD::poisson(3.0)}) {
    if (pmf(d, 0) != 0.0) continue;
    const RegimeSolution a = solve_size_info(d), b = solve_empty(d);
    c.that(d.describe() + " reproduces no-info solution",
           a.p_conditional == b.p_conditional && a.p_unconditional == b.p_unconditional &&
               a.p_bar == b.p_bar && a.solution_case == b.solution_case && a.residual == b.residual);
  }
  return c.ok;
}

bool c11_monte_carlo() {
  Checker c;
  const auto t0 = Clock::now();
  const std::vector<OD> laws = {OD::poisson(3.0),      OD::geometric_n(0.3),
                                OD::geometric_n0(0.2), OD::binomial(3, 0.9),
                                OD::binomial(13, 0.25), OD::finite({0.1, 0.1, 0.2, 0.6})};
  GameConfig base;
  base.trials = 1'000'000;
  int intervals = 0;
  auto check = [&](const std::string& what, const SimEstimate& e, double v) {
    ++intervals;
    const bool in = e.ci_lo <= v && v <= e.ci_hi;
    std::printf("  %-44s analytic %.8f  p_hat %.6f  [%.6f, %.6f]%s\n", what.c_str(), v, e.p_hat,
                e.ci_lo, e.ci_hi, in ? "" : "  <- outside");
    c.that(what + " interval contains analytic value", in);
    c.that(what + " no undecided trials", e.undecided == 0);
    c.that(what + " bias bound < 1e-5", e.bias_bound < 1e-5);
  };

  for (const auto& d : laws) {
    const std::string n = d.describe();
    const RegimeSolution s = solve_empty(d);
    c.that(n + " analytic value is not itself simulated", s.method != SolutionMethod::Simulation);
    const auto inc = to_increment(d, -2);
    GameConfig g = base;
    g.regime = GameRegime::NoInfo;
    check("none " + n + " walk S0=1", simulate_walk_hit(inc, 1, g), s.p_unconditional);
    check("none " + n + " walk S0=2", simulate_walk_hit(inc, 2, g), s.p_bar);
    g.starter = Starter::Breaker;
    check("none " + n + " game breaker", simulate_game(d, g), s.p_unconditional);
    g.starter = Starter::Maker;
    check("none " + n + " game maker", simulate_game(d, g), s.p_bar);
  }
  for (const auto& d : laws) {
    const std::string n = d.describe();
    const RegimeSolution s = solve_size_info(d);
    const double q = s.q;
    const double p_bar_cond = (s.p_bar - q) / (1.0 - q);
    const IncrementDistribution inc(skew(d, q), 2, IncrementKind::SkewedMinus2);
    GameConfig g = base;
    g.regime = GameRegime::SizeInfo;
    g.q = q;
    check("size " + n + " walk S0=1", simulate_walk_hit(inc, 1, g), s.p_conditional);
    check("size " + n + " walk S0=2", simulate_walk_hit(inc, 2, g), p_bar_cond);
    g.starter = Starter::Breaker;
    const SimEstimate b = simulate_game(d, g);
    check("size " + n + " game breaker", b, s.p_conditional);
    check("size " + n + " game breaker, unconditional", unconditional(b, q), s.p_unconditional);
    g.starter = Starter::Maker;
    check("size " + n + " game maker", simulate_game(d, g), p_bar_cond);
  }
  const int D = 8;
  for (const auto& d : laws) {
    GameConfig g = base;
    g.regime = GameRegime::FullInfoDepth;
    g.depth = D;
    check("full " + d.describe() + " depth 8", estimate_binary_subtree_prob(d, D, g),
          depth_iterate_p(d, D));
  }
  const double t = seconds_since(t0);
  std::printf("  %d intervals, runtime %.1f s (limit 300 s)\n", intervals, t);
  c.that("runtime < 300 s", t < 300.0);
  return c.ok;
}

bool c12_minimax_oracle() {
  Checker c;
  const auto t0 = Clock::now();
  const OracleReport r = run_minimax_oracle(3, 3, 3);
  const double t = seconds_since(t0);
  std::printf("  %llu trees, %llu games, %zu counterexamples, %.2f s (limit 120 s)\n",
              static_cast<unsigned long long>(r.trees), static_cast<unsigned long long>(r.games),
              r.counterexamples.size(), t);
  for (const auto& k : r.counterexamples)
    std::printf("  counterexample %s starter=%s\n", k.encoding.c_str(), to_string(k.starter).c_str());
  c.that("no counterexamples", r.counterexamples.empty());
  c.that("both starters played", r.games == 2 * r.trees);
  c.that("runtime < 120 s", t < 120.0);
  return c.ok;
}

std::vector<OD> supercritical_battery() {
  return {OD::poisson(2.5),          OD::poisson(3.0),           OD::poisson(4.0),
          OD::poisson(6.0),          OD::geometric_n(0.1),       OD::geometric_n(0.2),
          OD::geometric_n(0.3),      OD::geometric_n(0.45),      OD::geometric_n0(0.1),
          OD::geometric_n0(0.2),     OD::geometric_n0(0.3),      OD::binomial(4, 0.7),
          OD::binomial(6, 0.5),      OD::binomial(10, 0.4),      OD::binomial(13, 0.25),
          OD::binomial(3, 0.9),      OD::neg_binomial(2.5, 0.4), OD::one_or_many(4, 0.8),
          OD::one_or_many(3, 0.9),   OD::none_or_many(4, 0.8),   OD::finite({0.0, 0.2, 0.3, 0.5}),
          OD::finite({0.1, 0.1, 0.2, 0.6}), OD::finite({0.05, 0.0, 0.3, 0.0, 0.65})};
}

bool c13_properties() {
  Checker c;
  const auto laws = supercritical_battery();
  int solved = 0;
  for (const auto& d : laws) {
    for (Regime reg : {Regime::FullInfo, Regime::NoInfo, Regime::SizeInfo}) {
      const std::string n = d.describe() + " " + to_string(reg);
      const RegimeSolution s = solve(d, reg);
      const double p = s.p_unconditional;
      ++solved;
      c.that(n + ": 0 <= g(p)", pgf(d, p) >= -1e-9);
      c.that(n + ": g(p) <= p_bar", pgf(d, p) <= s.p_bar + 1e-9);
      c.that(n + ": p_bar <= p", s.p_bar <= p + 1e-9);
      c.that(n + ": p <= 1", p <= 1.0 + 1e-9);
      if (s.solution_case == SolutionCase::Interior) c.that(n + ": residual <= 1e-10", s.residual <= 1e-10);
      if (p > 1e-4 && p < 1.0 - 1e-4)
        c.that(n + fmt(": p - p_bar > 1e-6 (gap %.3g)", p - s.p_bar), p - s.p_bar > 1e-6);
      const bool equal = std::abs(p - s.p_bar) <= 1e-9;
      const bool trivial = p <= 1e-9 || p >= 1.0 - 1e-9;
      c.that(n + fmt(": (p = p_bar) iff p in {0,1}, p = %.10g", p), equal == trivial);
    }
    const double q = extinction_q(d);
    if (q < 1.0) c.near(d.describe() + " mean of skewed law", mean(skew(d, q)), mean(d), 1e-9);
  }
  const auto poi = OD::poisson(3.0);
  const RegimeSolution e = solve_empty(poi);
  const double gap = e.p_bar - pgf(poi, e.p_unconditional);
  std::printf("  poisson:3 no info: p_bar %.8f, g(p) %.8f\n", e.p_bar, pgf(poi, e.p_unconditional));
  c.that("p_bar - g(p) > 1e-6 for poisson:3", gap > 1e-6);
  std::printf("  %zu laws, %d solved instances\n", laws.size(), solved);
  return c.ok;
}

bool c14_alpha_verdict() {
  Checker c;
  const double target = 0.14967;
  const auto variants = alpha_study(OD::poisson(3.0));
  const AlphaVariant* best = nullptr;
  for (const auto& v : variants) {
    std::printf("  poisson:3 %-10s %-13s alpha %.8f p_bar %.8f (off by %.2e)\n", to_string(v.start).c_str(),
                to_string(v.norm).c_str(), v.alpha, v.p_bar, std::abs(v.p_bar - target));
    if (!best || std::abs(v.p_bar - target) < std::abs(best->p_bar - target)) best = &v;
  }
  for (const auto& v : alpha_study(OD::geometric_n0(0.25)))
    std::printf("  geo-n0:0.25 %-10s %-13s p_bar %.8f (exact 5/9 = %.8f)\n", to_string(v.start).c_str(),
                to_string(v.norm).c_str(), v.p_bar, 5.0 / 9.0);
  std::printf("  verdict: closest convention %s / %s\n", to_string(best->start).c_str(),
              to_string(best->norm).c_str());
  c.near("closest alpha convention p_bar", best->p_bar, target, 2e-3);
  return c.ok;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<bool()>>> criteria = {
      {"full-info geometric closed forms", c1_full_geometric},
      {"full-info Poisson criticality", c2_poisson_critical},
      {"binomial critical table", c3_binomial_table},
      {"sufficient-condition thresholds", c4_dekking},
      {"no-info closed forms", c5_no_info_closed_forms},
      {"separable engine", c6_separable},
      {"walk identity suite", c7_walk_identities},
      {"two-root / separable agreement", c8_two_root_vs_separable},
      {"coupling sandwich", c9_coupling},
      {"size-info regime", c10_size_info},
      {"Monte-Carlo concordance", c11_monte_carlo},
      {"exhaustive minimax oracle", c12_minimax_oracle},
      {"property suites", c13_properties},
      {"alpha convention verdict", c14_alpha_verdict},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    bool ok = false;
    try {
      ok = criteria[i].second();
    } catch (const std::exception& e) {
      std::printf("  exception: %s\n", e.what());
    }
    std::printf("%s %2zu %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first);
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
