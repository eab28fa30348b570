#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace gwmb {

using ScalarFn = std::function<double(double)>;

/// Root of f in [lo, hi] by bisection; f(lo) and f(hi) must differ in sign
/// (or one of them be zero). Stops when the bracket is narrower than tol.
double bisect_root(const ScalarFn& f, double lo, double hi, double tol);

struct Bracket {
  double lo;
  double hi;
};

/// Scans f on `points` equally spaced nodes of [lo, hi] and returns every
/// cell where f changes sign, in increasing order. An exact zero on a node
/// yields a degenerate bracket at that node.
std::vector<Bracket> sign_changes(const ScalarFn& f, double lo, double hi,
                                  int points);

struct GridMin {
  double x;
  double value;
};

/// Local minima of f on the grid, each refined by Brent's method inside the
/// neighbouring cells.
std::vector<GridMin> refined_local_minima(const ScalarFn& f, double lo,
                                          double hi, int points);

}  // namespace gwmb
