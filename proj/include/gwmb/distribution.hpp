#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gwmb {

using Rng = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSeparable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Default tail mass left out when an infinite support is stored as a vector.
inline constexpr double kDefaultTail = 1e-15;

// Parametric offspring laws. Construction goes through OffspringDistribution,
// which checks the parameter ranges.
struct GeometricN {  // p_k = s(1-s)^(k-1), k >= 1
  double s;
};
struct GeometricN0 {  // p_k = s(1-s)^k, k >= 0
  double s;
};
struct Poisson {
  double lambda;
};
struct Binomial {
  int n;
  double r;
};
struct NegBinomial {  // Polya law on N0, pgf (s / (1 - (1-s)x))^r
  double r;
  double s;
};
struct OneOrMany {  // p_1 = 1 - r, p_n = r
  int n;
  double r;
};
struct NoneOrMany {  // p_0 = 1 - r, p_n = r
  int n;
  double r;
};
/// Finitely supported pmf w_0..w_K. `tail` is the mass that lies beyond K
/// when the vector was produced by truncating an infinite law.
struct FinitePmf {
  std::vector<double> weights;
  double tail = 0.0;
};

/// Law of the number of children per node.
class OffspringDistribution {
 public:
  using Variant = std::variant<GeometricN, GeometricN0, Poisson, Binomial,
                               NegBinomial, OneOrMany, NoneOrMany, FinitePmf>;

  static OffspringDistribution geometric_n(double s);
  static OffspringDistribution geometric_n0(double s);
  static OffspringDistribution poisson(double lambda);
  static OffspringDistribution binomial(int n, double r);
  static OffspringDistribution neg_binomial(double r, double s);
  static OffspringDistribution one_or_many(int n, double r);
  static OffspringDistribution none_or_many(int n, double r);
  static OffspringDistribution finite(std::vector<double> weights,
                                      double tail = 0.0);

  const Variant& variant() const { return v_; }
  bool finite_support() const;
  /// Largest k with p_k > 0 (finite supports only).
  int support_max() const;
  /// Spec string in the CLI grammar, e.g. "poisson:3".
  std::string describe() const;

 private:
  explicit OffspringDistribution(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

double pmf(const OffspringDistribution& d, int k);

/// g(x), g'(x) or g''(x). Closed forms are used for every parametric law.
/// Throws std::domain_error at a pole of the closed form.
double pgf(const OffspringDistribution& d, double x, int order = 0);

double mean(const OffspringDistribution& d);

/// Smallest K with sum_{k>K} p_k < eps. Finite supports come back unchanged
/// with tail 0.
FinitePmf truncate(const OffspringDistribution& d, double eps = kDefaultTail);

/// Reusable sampler; holds the std distribution objects for one law.
class OffspringSampler {
 public:
  explicit OffspringSampler(const OffspringDistribution& d);
  int operator()(Rng& rng);

 private:
  struct Constant {
    int value;
  };
  struct TwoPoint {
    std::bernoulli_distribution coin;
    int on_false;
    int on_true;
  };
  struct GammaPoisson {
    std::gamma_distribution<double> rate;
  };
  struct Shifted {
    std::geometric_distribution<int> failures;
    int shift;
  };
  using Engine =
      std::variant<Constant, TwoPoint, Shifted, std::poisson_distribution<int>,
                   std::binomial_distribution<int>, GammaPoisson,
                   std::discrete_distribution<int>>;
  Engine engine_;
};

int sample(const OffspringDistribution& d, Rng& rng);

/// Number of children with infinite progeny, conditioned on at least one,
/// when each child independently survives with probability 1 - q.
/// Result is a FinitePmf with zero mass at 0.
OffspringDistribution skew(const OffspringDistribution& d, double q);

/// X with X * X = d (convolution square root). Throws NotSeparable.
OffspringDistribution split_half(const OffspringDistribution& d);

std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b);

enum class IncrementKind { OffspringMinus2, HalfMinus1, SkewedMinus2 };

/// Step law of an integer walk: the source law shifted down by 1 or 2.
class IncrementDistribution {
 public:
  IncrementDistribution(OffspringDistribution source, int shift,
                        IncrementKind kind);

  int k_min() const { return -shift_; }
  int shift() const { return shift_; }
  IncrementKind kind() const { return kind_; }
  const OffspringDistribution& source() const { return source_; }

  /// pmf indexed from k_min; mass beyond the last entry is `tail()`.
  const std::vector<double>& probabilities() const { return stored_.weights; }
  double tail() const { return stored_.tail; }
  double prob(int k) const;
  double mean() const;
  /// gamma(x) = g(x) / x^shift on [-1,0) U (0,1].
  double gamma(double x) const;

 private:
  OffspringDistribution source_;
  int shift_;
  IncrementKind kind_;
  FinitePmf stored_;
};

IncrementDistribution to_increment(const OffspringDistribution& d, int shift);

/// Parses `geo-n:S`, `geo-n0:S`, `poisson:L`, `binomial:N,R`, `nb:R,S`,
/// `one-or-many:N,R`, `none-or-many:N,R`, `pmf:w0,...,wK`.
OffspringDistribution parse_distribution(std::string_view spec);

}  // namespace gwmb
