#include "gwmb/roots.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <stdexcept>

namespace gwmb {

double bisect_root(const ScalarFn& f, double lo, double hi, double tol) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw std::invalid_argument("bisect_root: endpoints do not bracket a root");
  auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  boost::uintmax_t iters = 400;
  auto r = boost::math::tools::bisect(f, lo, hi, done, iters);
  return 0.5 * (r.first + r.second);
}

std::vector<Bracket> sign_changes(const ScalarFn& f, double lo, double hi,
                                  int points) {
  if (points < 2) throw std::invalid_argument("sign_changes: need >= 2 points");
  std::vector<Bracket> out;
  const double step = (hi - lo) / (points - 1);
  double xa = lo;
  double fa = f(xa);
  if (fa == 0.0) out.push_back({xa, xa});
  for (int i = 1; i < points; ++i) {
    const double xb = (i == points - 1) ? hi : lo + i * step;
    const double fb = f(xb);
    if (fb == 0.0) {
      out.push_back({xb, xb});
    } else if (fa != 0.0 && (fa < 0.0) != (fb < 0.0)) {
      out.push_back({xa, xb});
    }
    xa = xb;
    fa = fb;
  }
  return out;
}

std::vector<GridMin> refined_local_minima(const ScalarFn& f, double lo,
                                          double hi, int points) {
  std::vector<double> xs(points), ys(points);
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    xs[i] = (i == points - 1) ? hi : lo + i * step;
    ys[i] = f(xs[i]);
  }
  std::vector<GridMin> out;
  for (int i = 1; i + 1 < points; ++i) {
    if (!(ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1])) continue;
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::brent_find_minima(f, xs[i - 1], xs[i + 1],
                                                   52, iters);
    if (r.second < ys[i])
      out.push_back({r.first, r.second});
    else
      out.push_back({xs[i], ys[i]});
  }
  return out;
}

}  // namespace gwmb
