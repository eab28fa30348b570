#pragma once

#include "gwmb/distribution.hpp"
#include "gwmb/tree.hpp"

#include <cstdint>

namespace gwmb {

enum class GameRegime { NoInfo, SizeInfo, FullInfoDepth };

struct GameConfig {
  GameRegime regime = GameRegime::NoInfo;
  int depth = 0;  // FullInfoDepth only
  Starter starter = Starter::Breaker;
  std::uint64_t trials = 1'000'000;
  std::uint64_t master_seed = 20240601;
  /// Walk level / frontier size at which Maker is declared the winner.
  /// 0 picks the smallest level with residual hit probability below 1e-6.
  int threshold = 0;
  std::uint64_t max_rounds = 10'000'000;
  /// Extinction probability, used by SizeInfo games. Negative: compute it.
  double q = -1.0;
  /// Worker cap; 0 uses hardware concurrency (further capped by GWMB_THREADS).
  unsigned threads = 0;
};

struct SimEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;  // Breaker wins
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double bias_bound = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t undecided = 0;
  std::uint64_t exits_at_minus_one = 0;
  int threshold = 0;
};

struct Interval {
  double lo;
  double hi;
};

/// Wilson score interval at 95%.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Smallest M with 2 x_max^M < 1e-6 (steps bounded below by -2) or
/// rho^M < 1e-6 (skip-free steps), never below start + 1.
int default_threshold(const IncrementDistribution& inc, int start);

/// Breaker-win probability of the walk S_0 = start, stopped at S <= 0
/// (Breaker) or S >= M (Maker).
SimEstimate simulate_walk_hit(const IncrementDistribution& inc, int start,
                              const GameConfig& cfg);

/// Plays the game on a lazily revealed tree with uniformly random moves.
/// SizeInfo estimates are conditional on an infinite tree; see unconditional().
SimEstimate simulate_game(const OffspringDistribution& d, const GameConfig& cfg);

/// Maps a conditional SizeInfo estimate to q + (1 - q) p.
SimEstimate unconditional(const SimEstimate& conditional, double q);

/// p_D with p_0 = 0 and p_{d+1} = g(p_d) + (1 - p_d) g'(p_d).
double depth_iterate_p(const OffspringDistribution& d, int D);

/// Fraction of sampled trees in which the root does not carry a complete
/// binary tree of depth D. D <= 12.
SimEstimate estimate_binary_subtree_prob(const OffspringDistribution& d, int D,
                                         const GameConfig& cfg);

}  // namespace gwmb
