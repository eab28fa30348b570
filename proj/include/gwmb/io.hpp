#pragma once

#include "gwmb/analytic.hpp"
#include "gwmb/sim.hpp"
#include "gwmb/walk.hpp"

#include <json.hpp>

#include <string>

namespace gwmb {

/// 12 significant digits, the precision used for every emitted number.
std::string fmt12(double v);
/// Rounds to 12 significant digits so JSON output matches the CSV text.
double round12(double v);

nlohmann::ordered_json to_json(const RegimeSolution& s);
nlohmann::ordered_json to_json(const SimEstimate& e);
nlohmann::ordered_json to_json(const WalkQuantities& w);
nlohmann::ordered_json to_json(const CriticalPoint& c);
nlohmann::ordered_json to_json(const BoundsReport& b);

/// Column order: regime,p_conditional,p_unconditional,p_bar,case,residual
std::string csv_header_solution();
std::string csv_row(const RegimeSolution& s);

/// Column order: trials,successes,p_hat,ci_lo,ci_hi,bias_bound,seed
std::string csv_header_estimate();
std::string csv_row(const SimEstimate& e);

/// Column order: rho,sigma,theta,rho_odd,theta_odd,pi_minus1
std::string csv_header_walk();
std::string csv_row(const WalkQuantities& w);

}  // namespace gwmb
