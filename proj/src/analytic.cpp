#include "gwmb/analytic.hpp"

#include "gwmb/roots.hpp"
#include "gwmb/sim.hpp"
#include "gwmb/walk.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gwmb {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::FullInfo: return "full";
    case Regime::NoInfo: return "none";
    case Regime::SizeInfo: return "size";
  }
  return "?";
}

std::string to_string(SolutionCase c) {
  switch (c) {
    case SolutionCase::Trivial0: return "Trivial0";
    case SolutionCase::Trivial1: return "Trivial1";
    case SolutionCase::Interior: return "Interior";
  }
  return "?";
}

std::string to_string(SolutionMethod m) {
  switch (m) {
    case SolutionMethod::Dispatch: return "dispatch";
    case SolutionMethod::RootScan: return "root-scan";
    case SolutionMethod::Separable: return "separable";
    case SolutionMethod::TwoBoundary: return "two-boundary";
    case SolutionMethod::Simulation: return "simulation";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Regime parse_regime(std::string_view s) {
  if (s == "full") return Regime::FullInfo;
  if (s == "none") return Regime::NoInfo;
  if (s == "size") return Regime::SizeInfo;
  throw ParseError("regime must be full, none or size");
}

void SolverConfig::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be > 0");
  if (bracket_grid < 16) throw std::invalid_argument("bracket_grid must be >= 16");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(param_tol > 0.0)) throw std::invalid_argument("param_tol must be > 0");
}

namespace {

constexpr double kDelta = 1e-9;        // keeps scans off the trivial roots
constexpr double kSignMargin = 1e-14;  // dips shallower than this are tangencies
constexpr double kNearCritical = 1e-10;

RegimeSolution trivial(Regime regime, SolutionCase c, double q) {
  RegimeSolution s;
  s.regime = regime;
  const double v = c == SolutionCase::Trivial0 ? 0.0 : 1.0;
  s.p_conditional = s.p_unconditional = s.p_bar = v;
  s.solution_case = c;
  s.q = q;
  return s;
}

// Unique sign change of f on (kDelta, 1 - kDelta); nullopt if the scan finds
// none.
std::optional<double> unique_interior_root(const ScalarFn& f,
                                           const SolverConfig& cfg) {
  auto br = sign_changes(f, kDelta, 1.0 - kDelta, cfg.bracket_grid);
  if (br.empty()) return std::nullopt;
  return bisect_root(f, br.front().lo, br.front().hi, cfg.abs_tol);
}

// Scan of h(x) = g + (1-x) g' - x on [0,1).
struct FullScan {
  std::optional<double> first;   // smallest root
  std::optional<double> second;  // where h climbs back above 0
  double min_h = std::numeric_limits<double>::infinity();
};

FullScan scan_full_info(const OffspringDistribution& d, const SolverConfig& cfg) {
  const ScalarFn h = [&d](double x) {
    return pgf(d, x) + (1.0 - x) * pgf(d, x, 1) - x;
  };
  const ScalarFn dh = [&d](double x) { return (1.0 - x) * pgf(d, x, 2) - 1.0; };
  const int n = cfg.bracket_grid;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = static_cast<double>(i) / n;  // stops short of 1, where h = 0
    ys[i] = h(xs[i]);
  }
  FullScan out;
  for (double y : ys) out.min_h = std::min(out.min_h, y);

  // Bottom of a dip inside [a, b]: the simple root of h' when it brackets
  // one, which pins a tangency far more tightly than minimising h.
  auto bottom = [&](double a, double b) {
    if (dh(a) < 0.0 && dh(b) > 0.0) return bisect_root(dh, a, b, 1e-15);
    boost::uintmax_t iters = 200;
    return boost::math::tools::brent_find_minima(h, a, b, 52, iters).first;
  };
  // A dip touching zero within rounding is a double root.
  auto tangent = [&](double x) {
    out.first = x;
    out.second = x;
  };

  for (int i = 1; i < n; ++i) {
    const double right_edge = 1.0 - 1e-15;
    if (ys[i - 1] > 0.0 && ys[i] <= 0.0) {
      int j = i;
      while (j + 1 < n && ys[j + 1] <= 0.0) ++j;
      const double right = j + 1 < n ? xs[j + 1] : right_edge;
      double dip = 0.0;
      for (int k = i; k <= j; ++k) dip = std::min(dip, ys[k]);
      if (-dip <= kSignMargin) {
        const double x = bottom(xs[i - 1], right);
        out.min_h = std::min(out.min_h, h(x));
        tangent(x);
        break;
      }
      out.first = ys[i] == 0.0 ? xs[i] : bisect_root(h, xs[i - 1], xs[i], cfg.abs_tol);
      if (h(right) > 0.0) out.second = bisect_root(h, xs[j], right, cfg.abs_tol);
      break;
    }
    if (i + 1 < n && ys[i] > 0.0 && ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1]) {
      const double x = bottom(xs[i - 1], xs[i + 1]);
      const double v = h(x);
      out.min_h = std::min(out.min_h, v);
      if (v < -kSignMargin) {
        out.first = bisect_root(h, xs[i - 1], x, cfg.abs_tol);
        out.second = bisect_root(h, x, xs[i + 1], cfg.abs_tol);
        break;
      }
      if (v <= kSignMargin) {
        tangent(x);
        break;
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

double extinction_q(const OffspringDistribution& d, const SolverConfig& cfg) {
  cfg.validate();
  const double p0 = pmf(d, 0);
  const double p1 = pmf(d, 1);
  if (p0 == 0.0 || p1 == 1.0) return 0.0;
  if (mean(d) <= 1.0) return 1.0;

  double x = 0.0;
  for (long i = 0; i < cfg.max_iter; ++i) {
    const double nx = pgf(d, x);
    const bool done = std::abs(nx - x) < cfg.abs_tol;
    x = nx;
    if (done) break;
  }
  // Iterates approach q from below; widen to the right until g(b) < b.
  const ScalarFn f = [&d](double t) { return pgf(d, t) - t; };
  if (f(x) <= 0.0) return x;
  double step = cfg.abs_tol;
  double b = std::min(x + step, 1.0);
  while (b < 1.0 && f(b) >= 0.0) {
    step *= 2.0;
    b = std::min(x + step, 1.0);
  }
  if (b >= 1.0) return x;
  return bisect_root(f, x, b, cfg.abs_tol * 1e-3);
}

RegimeSolution solve_full_info(const OffspringDistribution& d,
                               const SolverConfig& cfg) {
  cfg.validate();
  const double q = extinction_q(d, cfg);
  if (pmf(d, 0) + pmf(d, 1) == 0.0) return trivial(Regime::FullInfo, SolutionCase::Trivial0, q);

  const FullScan scan = scan_full_info(d, cfg);
  if (!scan.first) {
    RegimeSolution s = trivial(Regime::FullInfo, SolutionCase::Trivial1, q);
    s.near_critical = std::abs(scan.min_h) <= kNearCritical;
    return s;
  }
  RegimeSolution s;
  s.regime = Regime::FullInfo;
  s.p_conditional = s.p_unconditional = *scan.first;
  s.p_bar = pgf(d, *scan.first);
  s.solution_case = SolutionCase::Interior;
  s.method = SolutionMethod::RootScan;
  const double p = *scan.first;
  s.residual = std::abs(pgf(d, p) + (1.0 - p) * pgf(d, p, 1) - p);
  s.near_critical = std::abs(scan.min_h) <= kNearCritical;
  s.q = q;
  return s;
}

RegimeSolution solve_empty(const OffspringDistribution& d, const SolverConfig& cfg) {
  cfg.validate();
  const double p0 = pmf(d, 0);
  const double p1 = pmf(d, 1);
  const double mu = mean(d);
  const double q = extinction_q(d, cfg);

  if (p0 == 0.0) {
    if (p1 == 0.0) return trivial(Regime::NoInfo, SolutionCase::Trivial0, q);
    if (mu <= 2.0) return trivial(Regime::NoInfo, SolutionCase::Trivial1, q);
    const ScalarFn f = [&d](double x) { return pgf(d, x) - x * x; };
    auto root = unique_interior_root(f, cfg);
    if (!root) {
      RegimeSolution s = trivial(Regime::NoInfo, SolutionCase::Trivial1, q);
      s.near_critical = true;
      return s;
    }
    RegimeSolution s;
    s.regime = Regime::NoInfo;
    s.p_conditional = s.p_unconditional = *root;
    s.p_bar = *root * *root;
    s.solution_case = SolutionCase::Interior;
    s.method = SolutionMethod::RootScan;
    s.residual = std::abs(f(*root));
    s.q = q;
    return s;
  }

  if (mu <= 2.0) return trivial(Regime::NoInfo, SolutionCase::Trivial1, q);

  RegimeSolution s;
  s.regime = Regime::NoInfo;
  s.solution_case = SolutionCase::Interior;
  s.q = q;
  bool have = false;
  try {
    const SeparableSolution sep = separable_solution(d, cfg);
    s.p_conditional = s.p_unconditional = sep.p;
    s.p_bar = sep.p_bar;
    s.residual = sep.residual;
    s.method = SolutionMethod::Separable;
    have = true;
  } catch (const Error&) {
    // not separable, or the half-walk root search failed: use two roots
  }
  if (!have) {
    try {
      const TwoBoundarySolution tb = two_boundary_hit(d, 1, cfg);
      s.p_conditional = s.p_unconditional = tb.h1;
      s.p_bar = tb.h2;
      s.residual = tb.residual;
      s.method = SolutionMethod::TwoBoundary;
      have = true;
    } catch (const NoNegativeRoot&) {
    }
  }
  if (!have) {
    GameConfig gc;
    gc.trials = 1'000'000;
    const IncrementDistribution inc = to_increment(d, -2);
    gc.starter = Starter::Breaker;
    const SimEstimate e1 = simulate_walk_hit(inc, 1, gc);
    gc.starter = Starter::Maker;
    const SimEstimate e2 = simulate_walk_hit(inc, 2, gc);
    s.p_conditional = s.p_unconditional = e1.p_hat;
    s.p_bar = e2.p_hat;
    s.residual = std::max(e1.ci_hi - e1.ci_lo, e2.ci_hi - e2.ci_lo) / 2.0;
    s.method = SolutionMethod::Simulation;
  }
  return s;
}

RegimeSolution solve_size_info(const OffspringDistribution& d,
                               const SolverConfig& cfg) {
  cfg.validate();
  const double p0 = pmf(d, 0);
  const double p1 = pmf(d, 1);
  if (p0 + p1 == 0.0) return trivial(Regime::SizeInfo, SolutionCase::Trivial0, 0.0);
  if (p0 == 0.0) {
    // q = 0: the skewed law is the law itself
    RegimeSolution s = solve_empty(d, cfg);
    s.regime = Regime::SizeInfo;
    return s;
  }
  const double q = extinction_q(d, cfg);
  if (mean(d) <= 2.0) return trivial(Regime::SizeInfo, SolutionCase::Trivial1, q);

  const double a = 1.0 - q;
  const ScalarFn h = [&d, a, q](double x) {
    return pgf(d, x * a + q) - a * x * x - q;
  };
  auto root = unique_interior_root(h, cfg);
  if (!root) {
    RegimeSolution s = trivial(Regime::SizeInfo, SolutionCase::Trivial1, q);
    s.near_critical = true;
    return s;
  }
  RegimeSolution s;
  s.regime = Regime::SizeInfo;
  s.p_conditional = *root;
  s.p_unconditional = q + a * *root;
  s.p_bar = pgf(d, s.p_unconditional);
  s.solution_case = SolutionCase::Interior;
  s.method = SolutionMethod::RootScan;
  s.residual = std::abs(h(*root));
  s.q = q;
  return s;
}

RegimeSolution solve(const OffspringDistribution& d, Regime regime,
                     const SolverConfig& cfg) {
  switch (regime) {
    case Regime::FullInfo: return solve_full_info(d, cfg);
    case Regime::NoInfo: return solve_empty(d, cfg);
    case Regime::SizeInfo: return solve_size_info(d, cfg);
  }
  throw std::logic_error("unknown regime");
}

// ---------------------------------------------------------------------------
// families and critical points

OffspringDistribution ParametricFamily::at(double param) const {
  switch (kind) {
    case Kind::Poisson: return OffspringDistribution::poisson(param);
    case Kind::GeometricN: return OffspringDistribution::geometric_n(param);
    case Kind::GeometricN0: return OffspringDistribution::geometric_n0(param);
    case Kind::Binomial: return OffspringDistribution::binomial(fixed_n, param);
    case Kind::OneOrMany: return OffspringDistribution::one_or_many(fixed_n, param);
  }
  throw std::logic_error("unknown family");
}

std::string ParametricFamily::name() const {
  switch (kind) {
    case Kind::Poisson: return "poisson";
    case Kind::GeometricN: return "geo-n";
    case Kind::GeometricN0: return "geo-n0";
    case Kind::Binomial: return "binomial:" + std::to_string(fixed_n);
    case Kind::OneOrMany: return "one-or-many:" + std::to_string(fixed_n);
  }
  return "?";
}

ParametricFamily ParametricFamily::parse(std::string_view s) {
  ParametricFamily f;
  auto with_n = [&](std::string_view prefix, Kind k) {
    if (s.size() <= prefix.size() || s.substr(0, prefix.size()) != prefix) return false;
    const std::string num(s.substr(prefix.size()));
    int n = 0;
    std::size_t used = 0;
    try {
      n = std::stoi(num, &used);
    } catch (const std::exception&) {
      throw ParseError("bad family size in '" + std::string(s) + "'");
    }
    if (used != num.size() || n < 0) throw ParseError("bad family size in '" + std::string(s) + "'");
    if (k == Kind::OneOrMany && n < 2) throw ParseError("one-or-many needs n >= 2");
    f.kind = k;
    f.fixed_n = n;
    return true;
  };
  if (s == "poisson") f.kind = Kind::Poisson;
  else if (s == "geo-n") f.kind = Kind::GeometricN;
  else if (s == "geo-n0") f.kind = Kind::GeometricN0;
  else if (with_n("binomial:", Kind::Binomial)) {}
  else if (with_n("one-or-many:", Kind::OneOrMany)) {}
  else throw ParseError("unknown family '" + std::string(s) + "'");
  return f;
}

CriticalPoint critical_parameter(const ParametricFamily& family, Regime regime,
                                 double lo, double hi, const SolverConfig& cfg) {
  cfg.validate();
  if (!(lo < hi)) throw std::invalid_argument("critical_parameter: need lo < hi");
  // Competitive: Maker wins with positive probability (a Trivial0 end of the
  // bracket counts too).
  auto interior = [&](double t) {
    return solve(family.at(t), regime, cfg).solution_case != SolutionCase::Trivial1;
  };
  const bool lo_in = interior(lo);
  const bool hi_in = interior(hi);
  if (lo_in == hi_in)
    throw NoTransitionInBracket("no change of solution case between " +
                                std::to_string(lo) + " and " + std::to_string(hi));
  double a = lo, b = hi;  // invariant: interior(a) == lo_in
  while (b - a > cfg.param_tol) {
    const double m = 0.5 * (a + b);
    if (interior(m) == lo_in)
      a = m;
    else
      b = m;
  }
  const double competitive = lo_in ? a : b;
  CriticalPoint cp;
  cp.param_c = 0.5 * (a + b);
  cp.solution = solve(family.at(competitive), regime, cfg);
  cp.p_at_critical = cp.solution.p_unconditional;
  if (regime == Regime::FullInfo) {
    const FullScan scan = scan_full_info(family.at(competitive), cfg);
    if (scan.first && scan.second) cp.p_at_critical = 0.5 * (*scan.first + *scan.second);
  }
  return cp;
}

// ---------------------------------------------------------------------------
// sufficient conditions

double expected_inverse(const OffspringDistribution& d) {
  const auto& v = d.variant();
  if (const auto* g = std::get_if<GeometricN>(&v)) {
    const double s = g->s;
    if (s == 1.0) return 0.5;
    return -s / (1.0 - s) - s * std::log(s) / ((1.0 - s) * (1.0 - s));
  }
  if (const auto* g = std::get_if<GeometricN0>(&v)) {
    const double s = g->s;
    if (s == 1.0) return 1.0;
    return -s * std::log(s) / (1.0 - s);
  }
  if (const auto* b = std::get_if<Binomial>(&v)) {
    if (b->r == 0.0) return 1.0;
    return (1.0 - std::pow(1.0 - b->r, b->n + 1)) / (b->r * (b->n + 1));
  }
  if (const auto* p = std::get_if<Poisson>(&v)) {
    return -std::expm1(-p->lambda) / p->lambda;
  }
  auto g = [&d](double x) { return pgf(d, x); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 15, 1e-14);
}

namespace {

InequalityCheck inverse_mean_check(const OffspringDistribution& d) {
  const double p0 = pmf(d, 0);
  const double p1 = pmf(d, 1);
  InequalityCheck c;
  c.lhs = expected_inverse(d);
  c.rhs = 0.25 + p0 / 2.0 + (p0 + p1) * (p0 + p1) / 4.0;
  c.holds = c.lhs <= c.rhs;
  return c;
}

CurvatureCheck curvature_check(const OffspringDistribution& d) {
  constexpr int kGrid = 100'000;
  auto f = [&d](double x) { return 1.0 / (1.0 - x) - pgf(d, x, 2); };
  int best = 0;
  double best_v = f(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double v = f(static_cast<double>(i) / kGrid);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  CurvatureCheck c{best_v, static_cast<double>(best) / kGrid, false};
  const double a = std::max(0.0, static_cast<double>(best - 1) / kGrid);
  const double b = std::min(static_cast<double>(best + 1) / kGrid, 1.0 - 1e-9);
  boost::uintmax_t iters = 200;
  auto m = boost::math::tools::brent_find_minima(f, a, b, 52, iters);
  if (m.second < c.min_value) {
    c.min_value = m.second;
    c.argmin = m.first;
  }
  c.holds = c.min_value > 0.0;
  return c;
}

}  // namespace

BoundsReport dekking_bounds(const OffspringDistribution& d) {
  BoundsReport r;
  r.inverse_mean = inverse_mean_check(d);
  r.curvature = curvature_check(d);
  const bool a = r.inverse_mean->holds;
  const bool b = r.curvature->holds;
  if (a && b) throw std::logic_error("dekking_bounds: both sufficient conditions hold");
  r.maker_has_chance = a ? Verdict::Yes : (b ? Verdict::No : Verdict::Inconclusive);
  r.breaker_sure = b ? Verdict::Yes : (a ? Verdict::No : Verdict::Inconclusive);
  return r;
}

BoundsReport bounds_by_coupling(const OffspringDistribution& d, Regime regime,
                                const SolverConfig& cfg) {
  const auto* bin = std::get_if<Binomial>(&d.variant());
  if (!bin || bin->n < 3 || bin->n % 2 == 0)
    throw std::invalid_argument("bounds_by_coupling needs a binomial law with odd n >= 3");
  const auto bigger = OffspringDistribution::binomial(bin->n + 1, bin->r);
  const auto smaller = OffspringDistribution::binomial(bin->n - 1, bin->r);
  const RegimeSolution lo = solve(bigger, regime, cfg);
  const RegimeSolution hi = solve(smaller, regime, cfg);

  BoundsReport r;
  r.coupling = CouplingInterval{bigger.describe(), smaller.describe(),
                                lo.p_unconditional, hi.p_unconditional,
                                lo.p_bar, hi.p_bar};
  if (hi.p_unconditional < 1.0) {
    r.maker_has_chance = Verdict::Yes;
    r.breaker_sure = Verdict::No;
  } else if (lo.p_unconditional >= 1.0) {
    r.maker_has_chance = Verdict::No;
    r.breaker_sure = Verdict::Yes;
  }
  return r;
}

double dekking_boundary(const ParametricFamily& family, DekkingSide side,
                        double lo, double hi, double tol) {
  auto holds = [&](double t) {
    const auto d = family.at(t);
    return side == DekkingSide::MakerChance ? inverse_mean_check(d).holds
                                            : curvature_check(d).holds;
  };
  const bool lo_holds = holds(lo);
  if (lo_holds == holds(hi))
    throw NoTransitionInBracket("condition does not switch inside the bracket");
  double a = lo, b = hi;
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (holds(m) == lo_holds)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace gwmb
