#include "gwmb/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gwmb {

std::string fmt12(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  return std::strtod(fmt12(v).c_str(), nullptr);
}

nlohmann::ordered_json to_json(const RegimeSolution& s) {
  nlohmann::ordered_json j;
  j["regime"] = to_string(s.regime);
  j["p_conditional"] = round12(s.p_conditional);
  j["p_unconditional"] = round12(s.p_unconditional);
  j["p_bar"] = round12(s.p_bar);
  j["case"] = to_string(s.solution_case);
  j["residual"] = round12(s.residual);
  return j;
}

nlohmann::ordered_json to_json(const SimEstimate& e) {
  nlohmann::ordered_json j;
  j["trials"] = e.trials;
  j["successes"] = e.successes;
  j["p_hat"] = round12(e.p_hat);
  j["ci_lo"] = round12(e.ci_lo);
  j["ci_hi"] = round12(e.ci_hi);
  j["bias_bound"] = round12(e.bias_bound);
  j["seed"] = e.seed;
  return j;
}

nlohmann::ordered_json to_json(const WalkQuantities& w) {
  nlohmann::ordered_json j;
  j["rho"] = round12(w.rho);
  j["sigma"] = round12(w.sigma);
  j["theta"] = round12(w.theta);
  j["rho_odd"] = round12(w.rho_odd);
  j["theta_odd"] = round12(w.theta_odd);
  j["pi_minus1"] = round12(w.pi_minus1);
  return j;
}

nlohmann::ordered_json to_json(const CriticalPoint& c) {
  nlohmann::ordered_json j;
  j["param_c"] = round12(c.param_c);
  j["p_at_critical"] = round12(c.p_at_critical);
  j["solution"] = to_json(c.solution);
  return j;
}

nlohmann::ordered_json to_json(const BoundsReport& b) {
  nlohmann::ordered_json j;
  j["maker_has_chance"] = to_string(b.maker_has_chance);
  j["breaker_sure"] = to_string(b.breaker_sure);
  if (b.inverse_mean) {
    j["inverse_mean"] = {{"lhs", round12(b.inverse_mean->lhs)},
                         {"rhs", round12(b.inverse_mean->rhs)},
                         {"holds", b.inverse_mean->holds}};
  }
  if (b.curvature) {
    j["curvature"] = {{"min_value", round12(b.curvature->min_value)},
                      {"argmin", round12(b.curvature->argmin)},
                      {"holds", b.curvature->holds}};
  }
  if (b.coupling) {
    const auto& c = *b.coupling;
    j["coupling"] = {{"lower_law", c.lower_law},   {"upper_law", c.upper_law},
                     {"p_lo", round12(c.p_lo)},     {"p_hi", round12(c.p_hi)},
                     {"p_bar_lo", round12(c.p_bar_lo)}, {"p_bar_hi", round12(c.p_bar_hi)}};
  }
  return j;
}

std::string csv_header_solution() {
  return "regime,p_conditional,p_unconditional,p_bar,case,residual";
}

std::string csv_row(const RegimeSolution& s) {
  return to_string(s.regime) + "," + fmt12(s.p_conditional) + "," +
         fmt12(s.p_unconditional) + "," + fmt12(s.p_bar) + "," +
         to_string(s.solution_case) + "," + fmt12(s.residual);
}

std::string csv_header_estimate() {
  return "trials,successes,p_hat,ci_lo,ci_hi,bias_bound,seed";
}

std::string csv_row(const SimEstimate& e) {
  return std::to_string(e.trials) + "," + std::to_string(e.successes) + "," +
         fmt12(e.p_hat) + "," + fmt12(e.ci_lo) + "," + fmt12(e.ci_hi) + "," +
         fmt12(e.bias_bound) + "," + std::to_string(e.seed);
}

std::string csv_header_walk() { return "rho,sigma,theta,rho_odd,theta_odd,pi_minus1"; }

std::string csv_row(const WalkQuantities& w) {
  return fmt12(w.rho) + "," + fmt12(w.sigma) + "," + fmt12(w.theta) + "," +
         fmt12(w.rho_odd) + "," + fmt12(w.theta_odd) + "," + fmt12(w.pi_minus1);
}

}  // namespace gwmb
