// gwmb: command-line front end for the solvers and simulators.
#include "gwmb/analytic.hpp"
#include "gwmb/distribution.hpp"
#include "gwmb/io.hpp"
#include "gwmb/sim.hpp"
#include "gwmb/tree.hpp"
#include "gwmb/walk.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace gwmb;

constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitOracle = 4;

struct Shared {
  std::string dist;
  std::string regime = "full";
  std::string starter = "breaker";
  std::string format = "json";
  double tol = 1e-12;
  std::uint64_t seed = 20240601;
  std::uint64_t trials = 1'000'000;
  std::string out;
};

struct Range {
  double lo;
  double hi;
  int steps;
};

Range parse_range(const std::string& s, bool need_steps) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != (need_steps ? 3u : 2u))
    throw ParseError(need_steps ? "--param expects lo:hi:steps" : "--param expects lo:hi");
  Range r{};
  try {
    std::size_t used = 0;
    r.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    r.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    r.steps = 2;
    if (need_steps) {
      r.steps = std::stoi(parts[2], &used);
      if (used != parts[2].size()) throw std::invalid_argument("steps");
    }
  } catch (const std::logic_error&) {
    throw ParseError("malformed --param range '" + s + "'");
  }
  if (!(r.lo <= r.hi) || r.steps < 1 || (r.steps == 1 && r.lo != r.hi))
    throw ParseError("malformed --param range '" + s + "'");
  return r;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError("cannot open --out file '" + path + "'");
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

SolverConfig solver_config(const Shared& sh) {
  SolverConfig cfg;
  cfg.abs_tol = sh.tol;
  return cfg;
}

void add_shared(CLI::App* app, Shared& sh, bool dist_required) {
  auto* d = app->add_option("--dist", sh.dist, "distribution spec or family");
  if (dist_required) d->required();
  app->add_option("--regime", sh.regime, "full | none | size")
      ->check(CLI::IsMember({"full", "none", "size"}));
  app->add_option("--starter", sh.starter, "breaker | maker")
      ->check(CLI::IsMember({"breaker", "maker"}));
  app->add_option("--format", sh.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--tol", sh.tol, "absolute root tolerance")->check(CLI::PositiveNumber);
  app->add_option("--seed", sh.seed, "master seed");
  app->add_option("--trials", sh.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  app->add_option("--out", sh.out, "write data to this file instead of stdout");
}

// --- solve ------------------------------------------------------------------

int cmd_solve(const Shared& sh) {
  const auto d = parse_distribution(sh.dist);
  const RegimeSolution s = solve(d, parse_regime(sh.regime), solver_config(sh));
  if (s.method == SolutionMethod::Simulation)
    std::cerr << "note: no exact method applied; value is a Monte-Carlo estimate\n";
  Output out(sh.out);
  if (sh.format == "csv")
    out.os() << csv_header_solution() << "\n" << csv_row(s) << "\n";
  else
    out.os() << to_json(s).dump(2) << "\n";
  return 0;
}

// --- scan -------------------------------------------------------------------

bool verify_row(const RegimeSolution& s) {
  if (s.solution_case == SolutionCase::Interior && s.residual > 1e-10) return false;
  return s.p_bar <= s.p_unconditional + 1e-9 && s.p_bar >= -1e-12 &&
         s.p_unconditional <= 1.0 + 1e-12;
}

int cmd_scan(const Shared& sh, const std::string& param, bool verify) {
  const ParametricFamily fam = ParametricFamily::parse(sh.dist);
  const Range r = parse_range(param, true);
  const Regime regime = parse_regime(sh.regime);
  const SolverConfig cfg = solver_config(sh);
  Output out(sh.out);
  out.os() << "param,p,p_bar,q,case\n";
  int bad = 0;
  for (int i = 0; i < r.steps; ++i) {
    const double t = r.steps == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (r.steps - 1);
    OffspringDistribution d = OffspringDistribution::finite({1.0});
    try {
      d = fam.at(t);
    } catch (const std::invalid_argument& e) {
      std::cerr << "skip " << fmt12(t) << ": " << e.what() << "\n";
      continue;
    }
    const RegimeSolution s = solve(d, regime, cfg);
    if (verify && !verify_row(s)) {
      std::cerr << "verify failed at " << fmt12(t) << "\n";
      ++bad;
    }
    double p = s.p_unconditional;
    double pb = s.p_bar;
    if (regime == Regime::SizeInfo) {
      // surviving-tree quantities
      p = s.p_conditional;
      pb = s.q < 1.0 ? (s.p_bar - s.q) / (1.0 - s.q) : 1.0;
    }
    out.os() << fmt12(t) << "," << fmt12(p) << "," << fmt12(pb) << "," << fmt12(s.q)
             << "," << to_string(s.solution_case) << "\n";
  }
  return bad ? kExitNumeric : 0;
}

// --- critical ---------------------------------------------------------------

int cmd_critical(const Shared& sh, const std::string& param) {
  const ParametricFamily fam = ParametricFamily::parse(sh.dist);
  const Range r = parse_range(param, false);
  SolverConfig cfg = solver_config(sh);
  const CriticalPoint cp = critical_parameter(fam, parse_regime(sh.regime), r.lo, r.hi, cfg);
  Output out(sh.out);
  if (sh.format == "csv")
    out.os() << "param_c,p_at_critical\n" << fmt12(cp.param_c) << "," << fmt12(cp.p_at_critical) << "\n";
  else
    out.os() << to_json(cp).dump(2) << "\n";
  return 0;
}

// --- bounds -----------------------------------------------------------------

int cmd_bounds(const Shared& sh, const std::string& method) {
  const auto d = parse_distribution(sh.dist);
  const BoundsReport b = method == "coupling"
                             ? bounds_by_coupling(d, parse_regime(sh.regime), solver_config(sh))
                             : dekking_bounds(d);
  Output out(sh.out);
  if (sh.format == "csv") {
    out.os() << "maker_has_chance,breaker_sure\n"
             << to_string(b.maker_has_chance) << "," << to_string(b.breaker_sure) << "\n";
  } else {
    out.os() << to_json(b).dump(2) << "\n";
  }
  return 0;
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const Shared& sh, const std::string& mode, int depth, int threshold) {
  const auto d = parse_distribution(sh.dist);
  GameConfig gc;
  gc.starter = parse_starter(sh.starter);
  gc.trials = sh.trials;
  gc.master_seed = sh.seed;
  gc.threshold = threshold;
  const Regime regime = parse_regime(sh.regime);
  const int start = gc.starter == Starter::Breaker ? 1 : 2;

  SimEstimate e;
  if (regime == Regime::FullInfo) {
    if (depth < 0) throw ParseError("full-information simulation needs --depth");
    gc.regime = GameRegime::FullInfoDepth;
    gc.depth = depth;
    e = estimate_binary_subtree_prob(d, depth, gc);
  } else if (mode == "walk") {
    if (regime == Regime::NoInfo) {
      e = simulate_walk_hit(to_increment(d, -2), start, gc);
    } else {
      const double q = extinction_q(d);
      e = simulate_walk_hit(IncrementDistribution(skew(d, q), 2, IncrementKind::SkewedMinus2),
                            start, gc);
    }
  } else {
    gc.regime = regime == Regime::NoInfo ? GameRegime::NoInfo : GameRegime::SizeInfo;
    e = simulate_game(d, gc);
  }
  if (e.undecided > 0) std::cerr << "warning: " << e.undecided << " trials hit the round cap\n";
  Output out(sh.out);
  if (sh.format == "csv")
    out.os() << csv_header_estimate() << "\n" << csv_row(e) << "\n";
  else
    out.os() << to_json(e).dump(2) << "\n";
  return 0;
}

// --- walk-quantities ----------------------------------------------------------

int cmd_walk(const Shared& sh) {
  const auto d = parse_distribution(sh.dist);
  const WalkQuantities w = conditioned_quantities(to_increment(split_half(d), -1), solver_config(sh));
  Output out(sh.out);
  if (sh.format == "csv")
    out.os() << csv_header_walk() << "\n" << csv_row(w) << "\n";
  else
    out.os() << to_json(w).dump(2) << "\n";
  return 0;
}

// --- oracle -----------------------------------------------------------------

int cmd_oracle(const Shared& sh, int max_depth, int max_branching, int reach, int max_edges,
               bool list) {
  Output out(sh.out);
  if (list) {
    for_each_small_tree(max_depth, max_branching, max_edges,
                        [&](const FiniteTree& t) { out.os() << canonical_encoding(t) << "\n"; });
    return 0;
  }
  const OracleReport r = run_minimax_oracle(max_depth, max_branching, reach, max_edges);
  for (const auto& c : r.counterexamples) {
    out.os() << "counterexample " << c.encoding << " starter=" << to_string(c.starter)
             << " minimax=" << to_string(c.minimax) << " predicted=" << to_string(c.predicted)
             << "\n";
  }
  out.os() << r.trees << " trees, " << r.games << " games, " << r.counterexamples.size()
           << " counterexamples\n";
  return r.counterexamples.empty() ? 0 : kExitOracle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maker-Breaker games on Galton-Watson trees"};
  app.require_subcommand(1);

  Shared sh;
  std::string param;
  bool verify = false;
  std::string method = "dekking";
  std::string mode = "walk";
  int depth = -1;
  int threshold = 0;
  int max_depth = 3, max_branching = 3, reach = 3, max_edges = 14;
  bool list = false;

  auto* solve_cmd = app.add_subcommand("solve", "solve one regime for one law");
  add_shared(solve_cmd, sh, true);

  auto* scan_cmd = app.add_subcommand("scan", "sweep a family parameter, CSV out");
  add_shared(scan_cmd, sh, true);
  scan_cmd->add_option("--param", param, "lo:hi:steps")->required();
  scan_cmd->add_flag("--verify", verify, "re-check residuals and ordering per row");

  auto* crit_cmd = app.add_subcommand("critical", "locate the critical family parameter");
  add_shared(crit_cmd, sh, true);
  crit_cmd->add_option("--param", param, "lo:hi bracket")->required();

  auto* bounds_cmd = app.add_subcommand("bounds", "sufficient conditions and coupling bounds");
  add_shared(bounds_cmd, sh, true);
  bounds_cmd->add_option("--method", method, "dekking | coupling")
      ->check(CLI::IsMember({"dekking", "coupling"}));

  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimate");
  add_shared(sim_cmd, sh, true);
  sim_cmd->add_option("--mode", mode, "walk | game")->check(CLI::IsMember({"walk", "game"}));
  sim_cmd->add_option("--depth", depth, "target depth for the full-information estimate");
  sim_cmd->add_option("--threshold", threshold, "Maker-win level (0 = automatic)");

  auto* walk_cmd = app.add_subcommand("walk-quantities", "half-step walk quantities");
  add_shared(walk_cmd, sh, true);

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive minimax check on small trees");
  add_shared(oracle_cmd, sh, false);
  oracle_cmd->add_option("--max-depth", max_depth);
  oracle_cmd->add_option("--max-branching", max_branching);
  oracle_cmd->add_option("--reach", reach);
  oracle_cmd->add_option("--max-edges", max_edges);
  oracle_cmd->add_flag("--list", list, "print the enumerated trees instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*solve_cmd) return cmd_solve(sh);
    if (*scan_cmd) return cmd_scan(sh, param, verify);
    if (*crit_cmd) return cmd_critical(sh, param);
    if (*bounds_cmd) return cmd_bounds(sh, method);
    if (*sim_cmd) return cmd_simulate(sh, mode, depth, threshold);
    if (*walk_cmd) return cmd_walk(sh);
    if (*oracle_cmd) return cmd_oracle(sh, max_depth, max_branching, reach, max_edges, list);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
