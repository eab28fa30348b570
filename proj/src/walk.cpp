#include "gwmb/walk.hpp"

#include "gwmb/roots.hpp"

#include <cmath>

namespace gwmb {

namespace {

constexpr double kEdge = 1e-12;
constexpr int kParityGrid = 2048;
constexpr double kRootTol = 1e-15;

bool even_support_only(const OffspringDistribution& x) {
  const FinitePmf t = truncate(x);
  for (std::size_t k = 1; k < t.weights.size(); k += 2)
    if (t.weights[k] > 0.0) return false;
  return true;
}

double characteristic(const OffspringDistribution& d, double x) {
  return pgf(d, x) - x * x;
}

}  // namespace

double hitting_rho(const IncrementDistribution& inc, const SolverConfig& cfg) {
  if (inc.k_min() != -1) throw std::invalid_argument("hitting_rho needs a skip-free increment law");
  return extinction_q(inc.source(), cfg);
}

WalkQuantities conditioned_quantities(const IncrementDistribution& inc,
                                      const SolverConfig& cfg) {
  if (inc.k_min() != -1)
    throw std::invalid_argument("conditioned_quantities needs a skip-free increment law");
  const OffspringDistribution& x = inc.source();
  WalkQuantities w{};
  w.pi_minus1 = inc.prob(-1);
  if (!(w.pi_minus1 > 0.0)) throw std::invalid_argument("conditioned_quantities needs P(step = -1) > 0");
  if (!(inc.mean() > 0.0)) throw std::invalid_argument("conditioned_quantities needs positive drift");
  if (even_support_only(x)) throw DegenerateParity("half law is supported on even integers only");

  w.rho = hitting_rho(inc, cfg);
  w.sigma = w.pi_minus1 * (1.0 - w.rho) / w.rho;
  w.theta = 1.0 - w.pi_minus1 / w.rho;

  const ScalarFn f = [&x](double z) { return pgf(x, z) / z + 1.0; };
  const auto br = sign_changes(f, -w.rho + kEdge, -kEdge, kParityGrid);
  if (br.empty()) throw DegenerateParity("gamma(z) = -1 has no root in (-rho, 0)");
  if (br.size() > 1)
    throw MultipleRoots("gamma(z) = -1 has " + std::to_string(br.size()) + " crossings in (-rho, 0)");
  w.z = bisect_root(f, br.front().lo, br.front().hi, kRootTol);
  w.rho_odd = 0.5 * (1.0 - w.z / w.rho);
  w.theta_theta_odd =
      w.pi_minus1 * (1.0 - w.rho_odd) / (w.rho * (2.0 * w.rho_odd - 1.0));
  w.theta_odd = w.theta > 0.0 ? w.theta_theta_odd / w.theta : 0.0;
  return w;
}

SeparableSolution separable_solution(const OffspringDistribution& d,
                                     const SolverConfig& cfg) {
  if (!(mean(d) > 2.0)) throw std::invalid_argument("separable_solution needs mean > 2");
  const OffspringDistribution half = split_half(d);
  SeparableSolution s{};
  if (pmf(half, 0) == 0.0) {
    // half >= 1, so every node has at least two children
    s.p = s.p_bar = 0.0;
    return s;
  }
  const IncrementDistribution inc = to_increment(half, -1);
  const WalkQuantities w = conditioned_quantities(inc, cfg);
  const double denom = 1.0 - w.theta + w.theta_theta_odd;  // 1 - theta (1 - theta_odd)
  s.walk = w;
  s.p = w.rho * (1.0 - w.sigma * w.rho_odd / denom);
  s.p_bar = w.rho * w.rho *
            (1.0 - 2.0 * w.sigma * w.rho_odd * (1.0 - w.rho_odd) / denom);
  s.residual = std::max(std::abs(pgf(half, w.rho) - w.rho),
                        std::abs(pgf(half, w.z) / w.z + 1.0));
  return s;
}

// ---------------------------------------------------------------------------

double TwoBoundarySolution::level(int m) const {
  if (m < -1) throw std::invalid_argument("level: m must be >= -1");
  return A * std::pow(x1, m) + (x2 == 0.0 ? (m == 0 ? B : 0.0) : B * std::pow(x2, m));
}

double TwoBoundarySolution::absorb_at_0_from(int m) const {
  if (m <= 0) return m == 0 ? 1.0 : 0.0;
  return A0 * std::pow(x1, m) + (x2 == 0.0 ? 0.0 : B0 * std::pow(x2, m));
}

double TwoBoundarySolution::absorb_at_minus1_from(int m) const {
  if (m <= 0) return m == 0 ? 0.0 : 1.0;
  return Am1 * std::pow(x1, m) + (x2 == 0.0 ? 0.0 : Bm1 * std::pow(x2, m));
}

TwoBoundarySolution two_boundary_hit(const OffspringDistribution& d, int start,
                                     const SolverConfig& cfg) {
  if (start != 1 && start != 2) throw std::invalid_argument("two_boundary_hit: start must be 1 or 2");
  if (!(mean(d) > 2.0)) throw std::invalid_argument("two_boundary_hit needs mean > 2");
  const ScalarFn f = [&d](double x) { return characteristic(d, x); };
  TwoBoundarySolution s;
  s.start = start;

  const auto pos = sign_changes(f, 1e-9, 1.0 - 1e-9, cfg.bracket_grid);
  if (pos.empty()) throw NoNegativeRoot("g(x) = x^2 has no root in (0,1)");
  s.x1 = bisect_root(f, pos.front().lo, pos.front().hi, kRootTol);

  if (pmf(d, 0) == 0.0) {
    s.x2 = 0.0;
    s.A = 1.0;
    s.B = 0.0;
    s.A0 = 1.0;
    s.B0 = 0.0;
    s.Am1 = 0.0;
    s.Bm1 = 0.0;
  } else {
    const auto neg = sign_changes(f, -1.0 + 1e-9, -1e-9, cfg.bracket_grid);
    if (neg.empty()) throw NoNegativeRoot("g(x) = x^2 has no root in (-1,0)");
    if (neg.size() > 1) throw NoNegativeRoot("g(x) = x^2 has several roots in (-1,0)");
    s.x2 = bisect_root(f, neg.front().lo, neg.front().hi, kRootTol);
    const double slope = pgf(d, s.x2, 1) - 2.0 * s.x2;
    if (std::abs(slope) < 1e-10) throw NoNegativeRoot("negative characteristic root is not simple");

    // A + B = u (level 0), A/x1 + B/x2 = v (level -1)
    const double det = 1.0 / s.x2 - 1.0 / s.x1;
    auto solve2 = [&](double u, double v, double& a, double& b) {
      a = (u / s.x2 - v) / det;
      b = (v - u / s.x1) / det;
    };
    solve2(1.0, 1.0, s.A, s.B);
    solve2(1.0, 0.0, s.A0, s.B0);
    solve2(0.0, 1.0, s.Am1, s.Bm1);
  }
  s.h1 = s.level(1);
  s.h2 = s.level(2);
  s.h = start == 1 ? s.h1 : s.h2;
  s.absorb_at_0 = s.absorb_at_0_from(start);
  s.absorb_at_minus1 = s.absorb_at_minus1_from(start);
  s.residual = std::abs(f(s.x1));
  if (s.x2 != 0.0) s.residual = std::max(s.residual, std::abs(f(s.x2)));
  return s;
}

// ---------------------------------------------------------------------------

std::string to_string(AlphaStart s) {
  return s == AlphaStart::StartAt1 ? "start-1" : "start-2";
}

std::string to_string(AlphaNorm n) {
  return n == AlphaNorm::Unconditional ? "unconditional" : "given-exit";
}

namespace {

double assemble_pbar(const OffspringDistribution& d, double p, double alpha) {
  const FinitePmf t = truncate(d);
  const double y = alpha + (1.0 - alpha) * p;
  double sum = t.weights[0];
  double pw = 1.0;  // y^(k-1)
  for (std::size_t k = 1; k < t.weights.size(); ++k) {
    sum += t.weights[k] * p * pw;
    pw *= y;
  }
  return sum;
}

double alpha_of(const TwoBoundarySolution& tb, AlphaNorm norm) {
  if (norm == AlphaNorm::Unconditional) return tb.absorb_at_minus1;
  const double exit = tb.absorb_at_0 + tb.absorb_at_minus1;
  return exit > 0.0 ? tb.absorb_at_minus1 / exit : 0.0;
}

}  // namespace

double prop_ineq_pbar(const OffspringDistribution& d, AlphaStart start,
                      AlphaNorm norm, const SolverConfig& cfg) {
  const double p = solve_empty(d, cfg).p_unconditional;
  if (pmf(d, 0) == 0.0) return assemble_pbar(d, p, 0.0);
  const TwoBoundarySolution tb =
      two_boundary_hit(d, start == AlphaStart::StartAt1 ? 1 : 2, cfg);
  return assemble_pbar(d, p, alpha_of(tb, norm));
}

std::vector<AlphaVariant> alpha_study(const OffspringDistribution& d,
                                      const SolverConfig& cfg) {
  const double p = solve_empty(d, cfg).p_unconditional;
  std::vector<AlphaVariant> out;
  for (AlphaStart st : {AlphaStart::StartAt1, AlphaStart::StartAt2}) {
    const TwoBoundarySolution tb =
        two_boundary_hit(d, st == AlphaStart::StartAt1 ? 1 : 2, cfg);
    for (AlphaNorm nm : {AlphaNorm::Unconditional, AlphaNorm::GivenExit}) {
      const double a = pmf(d, 0) == 0.0 ? 0.0 : alpha_of(tb, nm);
      out.push_back({st, nm, a, assemble_pbar(d, p, a)});
    }
  }
  return out;
}

}  // namespace gwmb
