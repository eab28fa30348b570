#include "gwmb/sim.hpp"

#include "gwmb/analytic.hpp"
#include "gwmb/roots.hpp"
#include "gwmb/walk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace gwmb {

namespace {

constexpr std::uint64_t kChunk = 4096;
constexpr double kZ95 = 1.959963985;
constexpr double kResidualTarget = 1e-6;

struct Tally {
  std::uint64_t successes = 0;
  std::uint64_t undecided = 0;
  std::uint64_t minus_one = 0;
};

unsigned worker_count(unsigned requested, std::uint64_t chunks) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GWMB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(chunks, 1)));
}

Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return Rng(seq);
}

// Runs `trial(rng, state)` for every trial. Chunks own their generator and
// state, so the merged tally does not depend on the worker count.
template <class MakeState, class Trial>
Tally fan_out(const GameConfig& cfg, MakeState make_state, Trial trial) {
  const std::uint64_t chunks = (cfg.trials + kChunk - 1) / kChunk;
  std::vector<Tally> per_chunk(chunks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      Rng rng = chunk_rng(cfg.master_seed, c);
      auto state = make_state();
      const std::uint64_t n = std::min(kChunk, cfg.trials - c * kChunk);
      Tally t;
      for (std::uint64_t i = 0; i < n; ++i) trial(rng, state, t);
      per_chunk[c] = t;
    }
  };
  const unsigned workers = worker_count(cfg.threads, chunks);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  Tally total;
  for (const Tally& t : per_chunk) {
    total.successes += t.successes;
    total.undecided += t.undecided;
    total.minus_one += t.minus_one;
  }
  return total;
}

SimEstimate finish(const GameConfig& cfg, const Tally& t, double bias, int threshold) {
  SimEstimate e;
  e.trials = cfg.trials;
  e.successes = t.successes;
  e.p_hat = static_cast<double>(t.successes) / static_cast<double>(cfg.trials);
  const Interval ci = wilson_interval(t.successes, cfg.trials);
  e.ci_lo = ci.lo;
  e.ci_hi = ci.hi;
  e.bias_bound = bias;
  e.seed = cfg.master_seed;
  e.undecided = t.undecided;
  e.exits_at_minus_one = t.minus_one;
  e.threshold = threshold;
  return e;
}

int threshold_for(double x_max, double factor, int start) {
  int m = start + 1;
  if (x_max <= 0.0) return m;
  if (x_max >= 1.0) throw std::invalid_argument("walk has no positive drift; no finite threshold");
  const double need = std::log(kResidualTarget / factor) / std::log(x_max);
  m = std::max(m, static_cast<int>(std::floor(need)) + 1);
  while (factor * std::pow(x_max, m) >= kResidualTarget) ++m;
  return m;
}

// (x_max, factor) of the residual hit bound factor * x_max^M.
std::pair<double, double> residual_base(const IncrementDistribution& inc) {
  bool can_fall = false;
  for (int k = inc.k_min(); k < 0; ++k) can_fall = can_fall || inc.prob(k) > 0.0;
  if (!can_fall) return {0.0, 1.0};  // never moves down
  if (inc.k_min() == -1) return {hitting_rho(inc), 1.0};
  const OffspringDistribution& d = inc.source();
  if (!(mean(d) > 2.0)) return {1.0, 2.0};
  try {
    const TwoBoundarySolution tb = two_boundary_hit(d, 1);
    return {std::max(std::abs(tb.x1), std::abs(tb.x2)), 2.0};
  } catch (const Error&) {
    // no usable negative root; bound from the positive root alone
    const ScalarFn f = [&d](double t) { return pgf(d, t) - t * t; };
    const auto br = sign_changes(f, 1e-9, 1.0 - 1e-9, 4096);
    if (br.empty()) return {1.0, 2.0};
    return {bisect_root(f, br.front().lo, br.front().hi, 1e-15), 2.0};
  }
}

}  // namespace

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

int default_threshold(const IncrementDistribution& inc, int start) {
  const auto [x, factor] = residual_base(inc);
  return threshold_for(x, factor, start);
}

SimEstimate simulate_walk_hit(const IncrementDistribution& inc, int start,
                              const GameConfig& cfg) {
  if (start != 1 && start != 2) throw std::invalid_argument("simulate_walk_hit: start must be 1 or 2");
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
  const auto [x, factor] = residual_base(inc);
  const int M = cfg.threshold > 0 ? std::max(cfg.threshold, start + 1)
                                  : threshold_for(x, factor, start);
  const double bias = x <= 0.0 ? 0.0 : factor * std::pow(x, M);
  const int shift = inc.shift();
  const OffspringDistribution src = inc.source();
  const std::uint64_t cap = cfg.max_rounds;

  const Tally t = fan_out(
      cfg, [&src] { return OffspringSampler(src); },
      [&](Rng& rng, OffspringSampler& step, Tally& tally) {
        long s = start;
        for (std::uint64_t r = 0; r < cap; ++r) {
          s += step(rng) - shift;
          if (s <= 0) {
            ++tally.successes;
            if (s == -1) ++tally.minus_one;
            return;
          }
          if (s >= M) return;
        }
        ++tally.undecided;
      });
  return finish(cfg, t, bias, M);
}

namespace {

struct GameState {
  OffspringSampler sampler;
  std::bernoulli_distribution survives;
  std::vector<int> frontier;  // unrevealed playable children, as arena ids
  FiniteTree tree;
};

}  // namespace

SimEstimate simulate_game(const OffspringDistribution& d, const GameConfig& cfg) {
  if (cfg.regime == GameRegime::FullInfoDepth)
    throw std::invalid_argument("simulate_game plays NoInfo or SizeInfo only");
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
  const bool size_info = cfg.regime == GameRegime::SizeInfo;
  const double q = size_info ? (cfg.q >= 0.0 ? cfg.q : extinction_q(d)) : 0.0;
  if (size_info && !(q < 1.0)) throw std::invalid_argument("SizeInfo game needs q < 1");

  // The frontier seen at Maker's turns is the walk with steps xi - 2 (or
  // xi' - 2), so the walk's threshold applies unchanged.
  const IncrementDistribution inc =
      size_info ? IncrementDistribution(skew(d, q), 2, IncrementKind::SkewedMinus2)
                : to_increment(d, -2);
  const int start = cfg.starter == Starter::Breaker ? 1 : 2;
  const auto [x, factor] = residual_base(inc);
  const int M = cfg.threshold > 0 ? std::max(cfg.threshold, start + 1)
                                  : threshold_for(x, factor, start);
  const double bias = x <= 0.0 ? 0.0 : factor * std::pow(x, M);
  const std::uint64_t cap = cfg.max_rounds;
  const bool breaker_first = cfg.starter == Starter::Breaker;

  const Tally t = fan_out(
      cfg,
      [&d, q] { return GameState{OffspringSampler(d), std::bernoulli_distribution(1.0 - q), {}, {}}; },
      [&](Rng& rng, GameState& g, Tally& tally) {
        g.tree = FiniteTree();
        g.frontier.clear();
        auto reveal = [&](int node) {
          if (!size_info) {
            const int k = g.sampler(rng);
            for (int i = 0; i < k; ++i) g.frontier.push_back(g.tree.add_child(node));
            return;
          }
          // Infinite-marked node: redraw until some child is infinite.
          for (;;) {
            const int k = g.sampler(rng);
            int live = 0;
            for (int i = 0; i < k; ++i) live += g.survives(rng) ? 1 : 0;
            if (live == 0) continue;
            for (int i = 0; i < live; ++i) g.frontier.push_back(g.tree.add_child(node));
            return;
          }
        };
        auto take = [&](std::vector<int>& f) {
          std::uniform_int_distribution<std::size_t> pick(0, f.size() - 1);
          const std::size_t i = pick(rng);
          const int v = f[i];
          f[i] = f.back();
          f.pop_back();
          return v;
        };

        reveal(0);
        bool breaker_turn = breaker_first;
        for (std::uint64_t r = 0; r < cap; ++r) {
          if (g.frontier.empty()) {
            ++tally.successes;
            if (breaker_turn) ++tally.minus_one;
            return;
          }
          if (breaker_turn) {
            take(g.frontier);
          } else {
            if (static_cast<int>(g.frontier.size()) >= M) return;
            reveal(take(g.frontier));
          }
          breaker_turn = !breaker_turn;
        }
        ++tally.undecided;
      });
  return finish(cfg, t, bias, M);
}

SimEstimate unconditional(const SimEstimate& e, double q) {
  SimEstimate u = e;
  u.p_hat = q + (1.0 - q) * e.p_hat;
  u.ci_lo = q + (1.0 - q) * e.ci_lo;
  u.ci_hi = q + (1.0 - q) * e.ci_hi;
  u.bias_bound = (1.0 - q) * e.bias_bound;
  return u;
}

double depth_iterate_p(const OffspringDistribution& d, int D) {
  if (D < 0) throw std::invalid_argument("depth_iterate_p: D must be >= 0");
  double p = 0.0;
  for (int i = 0; i < D; ++i) p = pgf(d, p) + (1.0 - p) * pgf(d, p, 1);
  return p;
}

namespace {

// Lazily samples the subtree of one node and reports whether it roots a
// complete binary tree of depth `level`.
bool roots_binary(OffspringSampler& s, Rng& rng, int level) {
  if (level == 0) return true;
  const int k = s(rng);
  int good = 0;
  for (int i = 0; i < k; ++i) {
    if (good + (k - i) < 2) return false;
    if (roots_binary(s, rng, level - 1) && ++good == 2) return true;
  }
  return false;
}

}  // namespace

SimEstimate estimate_binary_subtree_prob(const OffspringDistribution& d, int D,
                                         const GameConfig& cfg) {
  if (D < 0 || D > 12) throw std::invalid_argument("estimate_binary_subtree_prob: D must lie in [0,12]");
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
  const Tally t = fan_out(
      cfg, [&d] { return OffspringSampler(d); },
      [D](Rng& rng, OffspringSampler& s, Tally& tally) {
        if (!roots_binary(s, rng, D)) ++tally.successes;
      });
  return finish(cfg, t, 0.0, D);
}

}  // namespace gwmb
