#include "gwmb/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gwmb {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

// log C(n, k) for real n >= k >= 0
double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(int n, double r, int k) {
  if (k < 0 || k > n) return 0.0;
  if (r == 0.0) return k == 0 ? 1.0 : 0.0;
  if (r == 1.0) return k == n ? 1.0 : 0.0;
  if (n <= 60) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c * std::pow(r, k) * std::pow(1.0 - r, n - k);
  }
  return std::exp(log_choose(n, k) + k * std::log(r) +
                  (n - k) * std::log1p(-r));
}

// n (n-1) ... (n-order+1)
double falling(double n, int order) {
  double f = 1.0;
  for (int i = 0; i < order; ++i) f *= n - i;
  return f;
}

// sum_k c_k d^order/dx^order x^k for a sparse polynomial
double sparse_poly(std::initializer_list<std::pair<int, double>> terms,
                   double x, int order) {
  double sum = 0.0;
  for (auto [k, c] : terms) {
    if (k < order || c == 0.0) continue;
    sum += c * falling(k, order) * std::pow(x, k - order);
  }
  return sum;
}

double horner(const std::vector<double>& w, double x, int order) {
  double acc = 0.0;
  for (std::size_t i = w.size(); i-- > static_cast<std::size_t>(order);) {
    acc = acc * x + w[i] * falling(static_cast<double>(i), order);
  }
  return acc;
}

// 1 / (1 - (1-s)x), rejecting the pole
double geometric_kernel(double s, double x) {
  double den = 1.0 - (1.0 - s) * x;
  if (den <= 0.0) throw std::domain_error("pgf evaluated at or beyond its pole");
  return 1.0 / den;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

OffspringDistribution OffspringDistribution::geometric_n(double s) {
  require(s > 0.0 && s <= 1.0, "geo-n: s must lie in (0,1]");
  return OffspringDistribution(GeometricN{s});
}

OffspringDistribution OffspringDistribution::geometric_n0(double s) {
  require(s > 0.0 && s <= 1.0, "geo-n0: s must lie in (0,1]");
  return OffspringDistribution(GeometricN0{s});
}

OffspringDistribution OffspringDistribution::poisson(double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), "poisson: lambda must be > 0");
  return OffspringDistribution(Poisson{lambda});
}

OffspringDistribution OffspringDistribution::binomial(int n, double r) {
  require(n >= 0, "binomial: n must be >= 0");
  require(in_unit(r), "binomial: r must lie in [0,1]");
  return OffspringDistribution(Binomial{n, r});
}

OffspringDistribution OffspringDistribution::neg_binomial(double r, double s) {
  require(r > 0.0 && std::isfinite(r), "nb: r must be > 0");
  require(s > 0.0 && s < 1.0, "nb: s must lie in (0,1)");
  return OffspringDistribution(NegBinomial{r, s});
}

OffspringDistribution OffspringDistribution::one_or_many(int n, double r) {
  require(n >= 2, "one-or-many: n must be >= 2");
  require(r > 0.0 && r < 1.0, "one-or-many: r must lie in (0,1)");
  return OffspringDistribution(OneOrMany{n, r});
}

OffspringDistribution OffspringDistribution::none_or_many(int n, double r) {
  require(n >= 2, "none-or-many: n must be >= 2");
  require(r > 0.0 && r < 1.0, "none-or-many: r must lie in (0,1)");
  return OffspringDistribution(NoneOrMany{n, r});
}

OffspringDistribution OffspringDistribution::finite(std::vector<double> weights,
                                                    double tail) {
  require(!weights.empty(), "pmf: at least one weight required");
  require(tail >= 0.0, "pmf: tail mass must be nonnegative");
  double total = tail;
  bool positive = false;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "pmf: weights must be nonnegative");
    total += w;
    positive = positive || w > 0.0;
  }
  require(positive, "pmf: at least one weight must be positive");
  require(std::abs(total - 1.0) <= 1e-12, "pmf: total mass must be 1");
  while (weights.size() > 1 && weights.back() == 0.0) weights.pop_back();
  return OffspringDistribution(FinitePmf{std::move(weights), tail});
}

bool OffspringDistribution::finite_support() const {
  return std::visit(
      overloaded{[](const GeometricN& g) { return g.s == 1.0; },
                 [](const GeometricN0& g) { return g.s == 1.0; },
                 [](const Poisson&) { return false; },
                 [](const NegBinomial&) { return false; },
                 [](const auto&) { return true; }},
      v_);
}

int OffspringDistribution::support_max() const {
  if (!finite_support()) throw std::logic_error("support_max on infinite support");
  return std::visit(
      overloaded{[](const GeometricN&) { return 1; },
                 [](const GeometricN0&) { return 0; },
                 [](const Binomial& b) { return b.r == 0.0 ? 0 : b.n; },
                 [](const OneOrMany& o) { return o.n; },
                 [](const NoneOrMany& o) { return o.n; },
                 [](const FinitePmf& f) {
                   return static_cast<int>(f.weights.size()) - 1;
                 },
                 [](const auto&) { return 0; }},
      v_);
}

std::string OffspringDistribution::describe() const {
  return std::visit(
      overloaded{
          [](const GeometricN& g) { return "geo-n:" + fmt_double(g.s); },
          [](const GeometricN0& g) { return "geo-n0:" + fmt_double(g.s); },
          [](const Poisson& p) { return "poisson:" + fmt_double(p.lambda); },
          [](const Binomial& b) {
            return "binomial:" + std::to_string(b.n) + "," + fmt_double(b.r);
          },
          [](const NegBinomial& b) {
            return "nb:" + fmt_double(b.r) + "," + fmt_double(b.s);
          },
          [](const OneOrMany& o) {
            return "one-or-many:" + std::to_string(o.n) + "," + fmt_double(o.r);
          },
          [](const NoneOrMany& o) {
            return "none-or-many:" + std::to_string(o.n) + "," +
                   fmt_double(o.r);
          },
          [](const FinitePmf& f) {
            std::string s = "pmf:";
            for (std::size_t i = 0; i < f.weights.size(); ++i) {
              if (i) s += ',';
              s += fmt_double(f.weights[i]);
            }
            return s;
          }},
      v_);
}

// ---------------------------------------------------------------------------
// pmf / pgf / mean

double pmf(const OffspringDistribution& d, int k) {
  if (k < 0) return 0.0;
  return std::visit(
      overloaded{
          [k](const GeometricN& g) {
            return k >= 1 ? g.s * std::pow(1.0 - g.s, k - 1) : 0.0;
          },
          [k](const GeometricN0& g) { return g.s * std::pow(1.0 - g.s, k); },
          [k](const Poisson& p) {
            return std::exp(-p.lambda + k * std::log(p.lambda) -
                            std::lgamma(k + 1.0));
          },
          [k](const Binomial& b) { return binomial_pmf(b.n, b.r, k); },
          [k](const NegBinomial& b) {
            return std::exp(std::lgamma(k + b.r) - std::lgamma(b.r) -
                            std::lgamma(k + 1.0) + b.r * std::log(b.s) +
                            k * std::log1p(-b.s));
          },
          [k](const OneOrMany& o) {
            return k == 1 ? 1.0 - o.r : (k == o.n ? o.r : 0.0);
          },
          [k](const NoneOrMany& o) {
            return k == 0 ? 1.0 - o.r : (k == o.n ? o.r : 0.0);
          },
          [k](const FinitePmf& f) {
            return static_cast<std::size_t>(k) < f.weights.size()
                       ? f.weights[k]
                       : 0.0;
          }},
      d.variant());
}

double pgf(const OffspringDistribution& d, double x, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("pgf: order must be 0, 1 or 2");
  return std::visit(
      overloaded{
          [&](const GeometricN& g) {
            double a = 1.0 - g.s;
            double k = geometric_kernel(g.s, x);
            if (order == 0) return g.s * x * k;
            if (order == 1) return g.s * k * k;
            return 2.0 * g.s * a * k * k * k;
          },
          [&](const GeometricN0& g) {
            double a = 1.0 - g.s;
            double k = geometric_kernel(g.s, x);
            if (order == 0) return g.s * k;
            if (order == 1) return g.s * a * k * k;
            return 2.0 * g.s * a * a * k * k * k;
          },
          [&](const Poisson& p) {
            return std::pow(p.lambda, order) * std::exp(p.lambda * (x - 1.0));
          },
          [&](const Binomial& b) {
            if (order > b.n) return 0.0;
            return falling(b.n, order) * std::pow(b.r, order) *
                   std::pow(1.0 - b.r + b.r * x, b.n - order);
          },
          [&](const NegBinomial& b) {
            double a = 1.0 - b.s;
            double k = geometric_kernel(b.s, x);
            double g = std::pow(b.s * k, b.r);
            if (order == 0) return g;
            if (order == 1) return b.r * a * k * g;
            return b.r * (b.r + 1.0) * a * a * k * k * g;
          },
          [&](const OneOrMany& o) {
            return sparse_poly({{1, 1.0 - o.r}, {o.n, o.r}}, x, order);
          },
          [&](const NoneOrMany& o) {
            return sparse_poly({{0, 1.0 - o.r}, {o.n, o.r}}, x, order);
          },
          [&](const FinitePmf& f) { return horner(f.weights, x, order); }},
      d.variant());
}

double mean(const OffspringDistribution& d) {
  return std::visit(
      overloaded{[](const GeometricN& g) { return 1.0 / g.s; },
                 [](const GeometricN0& g) { return (1.0 - g.s) / g.s; },
                 [](const Poisson& p) { return p.lambda; },
                 [](const Binomial& b) { return b.n * b.r; },
                 [](const NegBinomial& b) { return b.r * (1.0 - b.s) / b.s; },
                 [](const OneOrMany& o) { return (1.0 - o.r) + o.n * o.r; },
                 [](const NoneOrMany& o) { return o.n * o.r; },
                 [](const FinitePmf& f) {
                   double m = 0.0;
                   for (std::size_t k = 0; k < f.weights.size(); ++k)
                     m += static_cast<double>(k) * f.weights[k];
                   return m;
                 }},
      d.variant());
}

// ---------------------------------------------------------------------------
// truncation

FinitePmf truncate(const OffspringDistribution& d, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("truncate: eps must be > 0");
  if (const auto* f = std::get_if<FinitePmf>(&d.variant())) return *f;
  if (d.finite_support()) {
    std::vector<double> w(d.support_max() + 1);
    for (int k = 0; k <= d.support_max(); ++k) w[k] = pmf(d, k);
    return FinitePmf{std::move(w), 0.0};
  }

  // Generate terms until they are negligible past the mean, then pick K from
  // suffix sums (summed small-to-large, so the tail is accurate).
  constexpr int kCap = 20'000'000;
  const double mu = mean(d);
  std::vector<double> terms;
  double prev = 1.0;
  for (int k = 0; k < kCap; ++k) {
    double t = pmf(d, k);
    terms.push_back(t);
    if (k > mu && t < 1e-40 && t <= prev) break;
    prev = t;
  }
  std::vector<double> suffix(terms.size() + 1, 0.0);
  for (std::size_t k = terms.size(); k-- > 0;) suffix[k] = suffix[k + 1] + terms[k];

  std::size_t K = 0;
  while (K + 1 < terms.size() && suffix[K + 1] >= eps) ++K;
  terms.resize(K + 1);
  return FinitePmf{std::move(terms), suffix[K + 1]};
}

// ---------------------------------------------------------------------------
// sampling

OffspringSampler::OffspringSampler(const OffspringDistribution& d)
    : engine_(Constant{0}) {
  std::visit(
      overloaded{
          [this](const GeometricN& g) {
            if (g.s == 1.0)
              engine_ = Constant{1};
            else
              engine_ = Shifted{std::geometric_distribution<int>(g.s), 1};
          },
          [this](const GeometricN0& g) {
            if (g.s == 1.0)
              engine_ = Constant{0};
            else
              engine_ = Shifted{std::geometric_distribution<int>(g.s), 0};
          },
          [this](const Poisson& p) {
            engine_ = std::poisson_distribution<int>(p.lambda);
          },
          [this](const Binomial& b) {
            engine_ = std::binomial_distribution<int>(b.n, b.r);
          },
          [this](const NegBinomial& b) {
            // Gamma-Poisson mixture handles non-integer r.
            engine_ = GammaPoisson{
                std::gamma_distribution<double>(b.r, (1.0 - b.s) / b.s)};
          },
          [this](const OneOrMany& o) {
            engine_ = TwoPoint{std::bernoulli_distribution(o.r), 1, o.n};
          },
          [this](const NoneOrMany& o) {
            engine_ = TwoPoint{std::bernoulli_distribution(o.r), 0, o.n};
          },
          [this](const FinitePmf& f) {
            engine_ = std::discrete_distribution<int>(f.weights.begin(),
                                                      f.weights.end());
          }},
      d.variant());
}

int OffspringSampler::operator()(Rng& rng) {
  return std::visit(
      overloaded{[](Constant& c) { return c.value; },
                 [&rng](TwoPoint& t) { return t.coin(rng) ? t.on_true : t.on_false; },
                 [&rng](Shifted& s) { return s.failures(rng) + s.shift; },
                 [&rng](GammaPoisson& gp) {
                   double rate = gp.rate(rng);
                   if (rate <= 0.0) return 0;
                   return std::poisson_distribution<int>(rate)(rng);
                 },
                 [&rng](auto& dist) { return static_cast<int>(dist(rng)); }},
      engine_);
}

int sample(const OffspringDistribution& d, Rng& rng) {
  OffspringSampler s(d);
  return s(rng);
}

// ---------------------------------------------------------------------------
// survival-skewed law

OffspringDistribution skew(const OffspringDistribution& d, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("skew: q must lie in [0,1)");
  const FinitePmf base = truncate(d, kDefaultTail);
  const std::size_t K = base.weights.size() - 1;
  std::vector<double> out(K + 1, 0.0);

  if (q == 0.0) {
    for (std::size_t k = 1; k <= K; ++k) out[k] = base.weights[k];
  } else {
    const double lp = std::log1p(-q);
    const double lq = std::log(q);
    for (std::size_t n = 1; n <= K; ++n) {
      const double pn = base.weights[n];
      if (pn == 0.0) continue;
      for (std::size_t k = 1; k <= n; ++k) {
        out[k] += pn * std::exp(log_choose(static_cast<double>(n), static_cast<double>(k)) +
                                k * lp + (n - k) * lq);
      }
    }
  }
  // Normalise by the thinned mass P(at least one survivor) = 1 - g(q);
  // equals 1 - q when q is the extinction probability.
  const double mass = std::accumulate(out.begin(), out.end(), 0.0);
  if (!(mass > 0.0)) throw std::invalid_argument("skew: law has no mass above 0");
  for (double& w : out) w /= mass;
  return OffspringDistribution::finite(std::move(out));
}

// ---------------------------------------------------------------------------
// separable half

std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

namespace {

OffspringDistribution finite_square_root(const std::vector<double>& w) {
  std::size_t first = 0;
  while (first < w.size() && w[first] == 0.0) ++first;
  std::size_t last = w.size() - 1;
  while (last > first && w[last] == 0.0) --last;
  if (first % 2 != 0 || (last - first) % 2 != 0)
    throw NotSeparable("support parity rules out an integer half");

  const std::size_t deg = (last - first) / 2;
  std::vector<double> a(w.begin() + first, w.begin() + last + 1);
  std::vector<double> c(deg + 1, 0.0);
  c[0] = std::sqrt(a[0]);
  for (std::size_t j = 1; j <= deg; ++j) {
    double acc = a[j];
    for (std::size_t i = 1; i < j; ++i) acc -= c[i] * c[j - i];
    c[j] = acc / (2.0 * c[0]);
  }
  for (double& v : c) {
    if (v < -1e-12) throw NotSeparable("square-root series has a negative coefficient");
    v = std::max(v, 0.0);
  }
  std::vector<double> back = convolve(c, c);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(back[i] - a[i]) > 1e-10)
      throw NotSeparable("square-root series does not terminate");
  }

  std::vector<double> half(first / 2 + deg + 1, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j <= deg; ++j) total += c[j];
  for (std::size_t j = 0; j <= deg; ++j) half[first / 2 + j] = c[j] / total;
  return OffspringDistribution::finite(std::move(half));
}

}  // namespace

OffspringDistribution split_half(const OffspringDistribution& d) {
  return std::visit(
      overloaded{
          [](const Poisson& p) { return OffspringDistribution::poisson(p.lambda / 2); },
          [](const NegBinomial& b) {
            return OffspringDistribution::neg_binomial(b.r / 2, b.s);
          },
          [](const GeometricN0& g) {
            if (g.s == 1.0) return OffspringDistribution::finite({1.0});
            return OffspringDistribution::neg_binomial(0.5, g.s);
          },
          [](const Binomial& b) {
            if (b.n % 2 != 0) throw NotSeparable("binomial with odd n is not separable");
            return OffspringDistribution::binomial(b.n / 2, b.r);
          },
          [](const GeometricN&) -> OffspringDistribution {
            throw NotSeparable("geo-n puts mass on 1, so no integer half exists");
          },
          [&d](const auto&) {
            return finite_square_root(truncate(d).weights);
          }},
      d.variant());
}

// ---------------------------------------------------------------------------
// increments

IncrementDistribution::IncrementDistribution(OffspringDistribution source,
                                             int shift, IncrementKind kind)
    : source_(std::move(source)), shift_(shift), kind_(kind),
      stored_(truncate(source_)) {
  if (shift != 1 && shift != 2)
    throw std::invalid_argument("increment shift must be 1 or 2");
}

double IncrementDistribution::prob(int k) const { return pmf(source_, k + shift_); }

double IncrementDistribution::mean() const { return gwmb::mean(source_) - shift_; }

double IncrementDistribution::gamma(double x) const {
  if (x == 0.0 || std::abs(x) > 1.0)
    throw std::domain_error("gamma defined on [-1,0) U (0,1]");
  return pgf(source_, x) / std::pow(x, shift_);
}

IncrementDistribution to_increment(const OffspringDistribution& d, int shift) {
  if (shift != -1 && shift != -2)
    throw std::invalid_argument("to_increment: shift must be -1 or -2");
  return IncrementDistribution(d, -shift,
                               shift == -1 ? IncrementKind::HalfMinus1
                                           : IncrementKind::OffspringMinus2);
}

// ---------------------------------------------------------------------------
// parsing

namespace {

std::vector<double> parse_numbers(std::string_view body, std::string_view spec) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string_view tok = body.substr(pos, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - pos);
    std::string buf(tok);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v))
      throw ParseError("bad number '" + buf + "' in distribution spec '" +
                       std::string(spec) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

int as_count(double v, std::string_view spec) {
  if (v != std::floor(v) || v < 0 || v > 1e6)
    throw ParseError("expected a nonnegative integer in '" + std::string(spec) + "'");
  return static_cast<int>(v);
}

}  // namespace

OffspringDistribution parse_distribution(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("distribution spec needs NAME:PARAMS, got '" + std::string(spec) + "'");
  const std::string_view name = spec.substr(0, colon);
  const std::vector<double> v = parse_numbers(spec.substr(colon + 1), spec);
  auto arity = [&](std::size_t n) {
    if (v.size() != n)
      throw ParseError("'" + std::string(name) + "' takes " + std::to_string(n) +
                       " parameter(s)");
  };

  try {
    if (name == "geo-n") {
      arity(1);
      return OffspringDistribution::geometric_n(v[0]);
    }
    if (name == "geo-n0") {
      arity(1);
      return OffspringDistribution::geometric_n0(v[0]);
    }
    if (name == "poisson") {
      arity(1);
      return OffspringDistribution::poisson(v[0]);
    }
    if (name == "binomial") {
      arity(2);
      return OffspringDistribution::binomial(as_count(v[0], spec), v[1]);
    }
    if (name == "nb") {
      arity(2);
      return OffspringDistribution::neg_binomial(v[0], v[1]);
    }
    if (name == "one-or-many") {
      arity(2);
      return OffspringDistribution::one_or_many(as_count(v[0], spec), v[1]);
    }
    if (name == "none-or-many") {
      arity(2);
      return OffspringDistribution::none_or_many(as_count(v[0], spec), v[1]);
    }
    if (name == "pmf") {
      double total = 0.0;
      for (double w : v) {
        if (w < 0.0) throw ParseError("pmf weights must be nonnegative");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-6)
        throw ParseError("pmf weights sum to " + fmt_double(total) + ", expected 1");
      std::vector<double> w = v;
      for (double& x : w) x /= total;
      double fixed = std::accumulate(w.begin(), w.end(), 0.0);
      // absorb the last rounding bit so the 1e-12 mass check always passes
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (*it > 0.0) {
          *it += 1.0 - fixed;
          break;
        }
      }
      return OffspringDistribution::finite(std::move(w));
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown distribution '" + std::string(name) + "'");
}

}  // namespace gwmb
