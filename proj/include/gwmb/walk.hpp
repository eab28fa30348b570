#pragma once

#include "gwmb/analytic.hpp"
#include "gwmb/distribution.hpp"

#include <vector>

namespace gwmb {

class NoNegativeRoot : public Error {
 public:
  using Error::Error;
};

class MultipleRoots : public Error {
 public:
  using Error::Error;
};

class DegenerateParity : public Error {
 public:
  using Error::Error;
};

/// Hitting quantities of a skip-free walk with steps X - 1, started at 0.
struct WalkQuantities {
  double rho;        // P(ever hit -1)
  double sigma;      // P(S_n > 0 for all n >= 1)
  double theta;      // P(revisit 0 before reaching -1)
  double rho_odd;
  double theta_odd;
  double pi_minus1;  // P(X = 0)
  double theta_theta_odd;  // product, kept separately for small theta
  double z;          // root of g_X(z)/z = -1 on (-rho, 0)
};

double hitting_rho(const IncrementDistribution& inc, const SolverConfig& cfg = {});

WalkQuantities conditioned_quantities(const IncrementDistribution& inc,
                                      const SolverConfig& cfg = {});

struct SeparableSolution {
  double p;
  double p_bar;
  WalkQuantities walk;
  double residual;
};

/// Winning probabilities from the half-step walk of a separable offspring
/// law. Requires mean(d) > 2.
SeparableSolution separable_solution(const OffspringDistribution& d,
                                     const SolverConfig& cfg = {});

/// Hitting probabilities of {..., -1, 0} for the walk with steps xi - 2,
/// built from the two real roots of g(x) = x^2 inside (-1, 1).
struct TwoBoundarySolution {
  int start = 1;
  double x1 = 0.0;  // in (0,1)
  double x2 = 0.0;  // in (-1,0); 0 when p_0 = 0
  double A = 1.0;
  double B = 0.0;
  double h = 0.0;   // h(start)
  double h1 = 0.0;
  double h2 = 0.0;
  /// P(first level <= 0 is exactly 0 / exactly -1 | start).
  double absorb_at_0 = 0.0;
  double absorb_at_minus1 = 0.0;
  double residual = 0.0;  // max |g(x_i) - x_i^2|

  double level(int m) const;                     // h(m), m >= -1
  double absorb_at_0_from(int m) const;
  double absorb_at_minus1_from(int m) const;

  double A0 = 1.0, B0 = 0.0;    // boundary pair (1, 0)
  double Am1 = 0.0, Bm1 = 0.0;  // boundary pair (0, 1)
};

/// Throws NoNegativeRoot when g(x) - x^2 has no simple root in (-1, 0).
TwoBoundarySolution two_boundary_hit(const OffspringDistribution& d, int start,
                                     const SolverConfig& cfg = {});

enum class AlphaStart { StartAt1, StartAt2 };
enum class AlphaNorm {
  Unconditional,  // alpha = P(exit at -1)
  GivenExit,      // alpha = P(exit at -1 | walk exits)
};

/// p_bar assembled as p_0 + sum_k p_k p (alpha + (1 - alpha) p)^(k-1), with
/// alpha read off the two-boundary walk under the given start and
/// normalisation.
double prop_ineq_pbar(const OffspringDistribution& d, AlphaStart start,
                      AlphaNorm norm = AlphaNorm::Unconditional,
                      const SolverConfig& cfg = {});

struct AlphaVariant {
  AlphaStart start;
  AlphaNorm norm;
  double alpha;
  double p_bar;
};

/// All four alpha conventions for d, in a fixed order.
std::vector<AlphaVariant> alpha_study(const OffspringDistribution& d,
                                      const SolverConfig& cfg = {});

std::string to_string(AlphaStart s);
std::string to_string(AlphaNorm n);

}  // namespace gwmb
