#pragma once

#include "gwmb/distribution.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace gwmb {

enum class Regime { FullInfo, NoInfo, SizeInfo };
enum class SolutionCase { Trivial0, Trivial1, Interior };
/// How a solution was obtained. Simulation marks a Monte-Carlo fallback.
enum class SolutionMethod { Dispatch, RootScan, Separable, TwoBoundary, Simulation };

std::string to_string(Regime r);
std::string to_string(SolutionCase c);
std::string to_string(SolutionMethod m);
Regime parse_regime(std::string_view s);  // "full" | "none" | "size"

class NoTransitionInBracket : public Error {
 public:
  using Error::Error;
};

struct SolverConfig {
  double abs_tol = 1e-12;
  long max_iter = 1'000'000;
  int bracket_grid = 4096;
  double param_tol = 1e-9;

  void validate() const;
};

struct RegimeSolution {
  Regime regime = Regime::FullInfo;
  double p_conditional = 1.0;
  double p_unconditional = 1.0;
  double p_bar = 1.0;
  SolutionCase solution_case = SolutionCase::Trivial1;
  /// |LHS - RHS| of the defining equation at the returned root (0 for
  /// trivial cases). For walk-based answers, the worst residual of the
  /// characteristic roots the answer was assembled from.
  double residual = 0.0;
  SolutionMethod method = SolutionMethod::Dispatch;
  /// Set when the regime function comes within 1e-10 of a tangency.
  bool near_critical = false;
  /// Extinction probability of the offspring law.
  double q = 1.0;
};

double extinction_q(const OffspringDistribution& d, const SolverConfig& cfg = {});

RegimeSolution solve_full_info(const OffspringDistribution& d,
                               const SolverConfig& cfg = {});
RegimeSolution solve_empty(const OffspringDistribution& d,
                           const SolverConfig& cfg = {});
RegimeSolution solve_size_info(const OffspringDistribution& d,
                               const SolverConfig& cfg = {});
RegimeSolution solve(const OffspringDistribution& d, Regime regime,
                     const SolverConfig& cfg = {});

/// One-parameter law families used by scans and critical-point search.
struct ParametricFamily {
  enum class Kind { Poisson, GeometricN, GeometricN0, Binomial, OneOrMany };
  Kind kind = Kind::Poisson;
  int fixed_n = 0;  // Binomial / OneOrMany only

  OffspringDistribution at(double param) const;
  std::string name() const;
  /// "poisson", "geo-n", "geo-n0", "binomial:N", "one-or-many:N".
  static ParametricFamily parse(std::string_view s);
};

struct CriticalPoint {
  double param_c;
  double p_at_critical;
  RegimeSolution solution;  // at the competitive end of the final bracket
};

/// Bisects the family parameter over [lo, hi] for the point where the regime
/// equation first admits an interior root. For a discontinuous transition
/// p_at_critical is the tangency (double-root) location.
CriticalPoint critical_parameter(const ParametricFamily& family, Regime regime,
                                 double lo, double hi,
                                 const SolverConfig& cfg = {});

enum class Verdict { Yes, No, Inconclusive };
std::string to_string(Verdict v);

struct InequalityCheck {
  double lhs;
  double rhs;
  bool holds;  // lhs <= rhs
};

struct CurvatureCheck {
  double min_value;  // min over [0,1) of 1/(1-x) - g''(x)
  double argmin;
  bool holds;        // min_value > 0
};

struct CouplingInterval {
  std::string lower_law;  // larger offspring law, gives the lower ends
  std::string upper_law;
  double p_lo, p_hi;
  double p_bar_lo, p_bar_hi;
};

struct BoundsReport {
  Verdict maker_has_chance = Verdict::Inconclusive;
  Verdict breaker_sure = Verdict::Inconclusive;
  std::optional<InequalityCheck> inverse_mean;
  std::optional<CurvatureCheck> curvature;
  std::optional<CouplingInterval> coupling;
};

/// E[1 / (xi + 1)], closed form where one exists, otherwise the integral of g
/// over [0,1].
double expected_inverse(const OffspringDistribution& d);

BoundsReport dekking_bounds(const OffspringDistribution& d);

/// Sandwich for binomial laws with odd n between Bin(n+1, r) and Bin(n-1, r).
BoundsReport bounds_by_coupling(const OffspringDistribution& d, Regime regime,
                                const SolverConfig& cfg = {});

enum class DekkingSide { MakerChance, BreakerSure };

/// Family parameter in [lo, hi] where the chosen sufficient condition switches
/// on or off, found by bisection to `tol`.
double dekking_boundary(const ParametricFamily& family, DekkingSide side,
                        double lo, double hi, double tol = 1e-12);

}  // namespace gwmb
