#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cograd/rational.hpp"

namespace Eigen {

template <>
struct NumTraits<cograd::Rational> {
  using Real = cograd::Rational;
  using NonInteger = cograd::Rational;
  using Literal = cograd::Rational;
  using Nested = cograd::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 12,
    MulCost = 12,
  };
  static inline Real epsilon() { return cograd::Rational(0); }
  static inline Real dummy_precision() { return cograd::Rational(0); }
  static inline int digits10() { return 18; }
};

}  // namespace Eigen

namespace cograd {

/// Relative tolerance used to declare two floating residuals (or slopes) tied.
inline constexpr double kDefaultTieTolerance = 1e-12;

/// Largest n whose n! permutations are enumerated for the exact null by
/// default; override per call or via the COGRAD_NULL_CEILING environment
/// variable in the CLI.
inline constexpr int kDefaultNullCeiling = 10;

/// Guard on the O(N^2) pairwise-slope materialization.
inline constexpr int kDefaultBreakpointGuard = 5000;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IndexVector = Eigen::VectorXi;

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

/// Two residuals compare equal, so ranks are undefined at this slope.
class TiedValues : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// gini_at was asked for a value exactly on a rank-reshuffle slope; use the
/// step function's right-continuous convention instead.
class BreakpointHit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Confidence level outside (0, 1), or a non-positive critical value.
class DegenerateLevel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Even the widest acceptance region cannot reach the requested level.
class LevelUnattainable : public std::runtime_error {
 public:
  explicit LevelUnattainable(Rational max_attainable)
      : std::runtime_error("requested confidence level is unattainable; maximum attainable level is " +
                           max_attainable.to_string()),
        max_attainable(max_attainable) {}
  Rational max_attainable;
};

/// Sample size exceeds the exact-enumeration ceiling.
class NullTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration could not reach the required error bound.
class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The design's limit function makes the slope constant C vanish, so the
/// asymptotic variance formulas do not apply.
class DegenerateDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The error model lacks a quantile function, so inverse-cdf sampling is
/// impossible.
class ModelNotSampleable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two sample points share an abscissa.
class DuplicateAbscissa : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sample is larger than the pairwise-slope guard allows.
class SampleTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Scalar abstraction: the statistical core is templated on double (fast,
// tolerance-based ties) and Rational (exact ties and exact golden values).
// ---------------------------------------------------------------------------

template <class Scalar>
struct scalar_ops;

template <>
struct scalar_ops<double> {
  static bool near_equal(double a, double b, double rel_tol) {
    if (a == b) return true;
    return std::fabs(a - b) <= rel_tol * std::max(std::fabs(a), std::fabs(b));
  }
  static double midpoint(double a, double b) { return a + (b - a) / 2; }
  static double from_int(long long v) { return static_cast<double>(v); }
  static double to_double(double v) { return v; }
};

template <>
struct scalar_ops<Rational> {
  static bool near_equal(const Rational& a, const Rational& b, double /*rel_tol*/) {
    return a == b;
  }
  static Rational midpoint(const Rational& a, const Rational& b) {
    return (a + b) / Rational(2);
  }
  static Rational from_int(long long v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.to_double(); }
};

// ---------------------------------------------------------------------------
// Sample
// ---------------------------------------------------------------------------

/// Paired observations (x_i, y_i) with strictly increasing abscissae.
template <class Scalar>
struct SampleT {
  Vector<Scalar> x;
  Vector<Scalar> y;
  int size() const { return static_cast<int>(x.size()); }
};

using Sample = SampleT<double>;
using ExactSample = SampleT<Rational>;

/// Validates and normalizes raw columns into a Sample: pairs are sorted by x
/// and the abscissae must end up strictly increasing (exact comparison; a
/// duplicate x makes every pairwise slope through it undefined).
template <class Scalar>
SampleT<Scalar> make_sample(Vector<Scalar> x, Vector<Scalar> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("x and y must have equal length");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("need at least two observations");
  }
  const int n = static_cast<int>(x.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });

  SampleT<Scalar> out;
  out.x.resize(n);
  out.y.resize(n);
  for (int k = 0; k < n; ++k) {
    out.x[k] = x[order[k]];
    out.y[k] = y[order[k]];
  }
  for (int k = 1; k < n; ++k) {
    if (out.x[k - 1] == out.x[k]) {
      throw DuplicateAbscissa("duplicate x value at sorted position " + std::to_string(k));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// GiniValue
// ---------------------------------------------------------------------------

/// Value of the cograduation index as the exact fraction num/den, where den
/// is the normalizer D = N^2 (N even) or N^2 - 1 (N odd) and num = 2(V - U)
/// is kept unreduced so tables stay aligned across one sample.
struct GiniValue {
  long long num = 0;
  long long den = 1;

  Rational reduced() const { return Rational(num, den); }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const GiniValue& a, const GiniValue& b) noexcept {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
  friend std::strong_ordering operator<=>(const GiniValue& a, const GiniValue& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num) * b.den;
    const __int128 rhs = static_cast<__int128>(b.num) * a.den;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const GiniValue& a, const Rational& r) noexcept {
    return static_cast<__int128>(a.num) * r.den() == static_cast<__int128>(r.num()) * a.den;
  }
  friend std::strong_ordering operator<=>(const GiniValue& a, const Rational& r) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num) * r.den();
    const __int128 rhs = static_cast<__int128>(r.num()) * a.den;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

}  // namespace cograd
