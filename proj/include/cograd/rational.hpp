#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cograd {

/// Exact rational number on 64-bit numerator/denominator.
///
/// Invariants: den > 0 and gcd(|num|, den) == 1.  Every arithmetic operation
/// runs its intermediates through 128-bit integers and throws
/// std::overflow_error if the reduced result does not fit; callers that hit
/// the limit should switch to the floating-point code path.
class Rational {
 public:
  constexpr Rational() noexcept : num_(0), den_(1) {}
  constexpr Rational(long long value) noexcept : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(long long num, long long den);

  /// Parses a decimal literal such as "2.5", "-0.125", "3", or "12e-4".
  /// Throws std::invalid_argument on malformed input and std::overflow_error
  /// when the exact value does not fit 64/64 bits.
  static Rational from_decimal(std::string_view text);

  /// Exact binary expansion of a finite double when it fits 64/64 bits,
  /// otherwise the closest continued-fraction approximant that does.
  static Rational from_double(double value);

  long long num() const noexcept { return num_; }
  long long den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// "num/den", or just "num" for integers.
  std::string to_string() const;

  /// Exact decimal expansion when the denominator is of the form 2^a * 5^b
  /// (e.g. "1.25"); otherwise a round-trip floating rendering.
  std::string to_decimal_string() const;

  Rational operator-() const { return Rational(-num_, den_, already_reduced_tag{}); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  struct already_reduced_tag {};
  constexpr Rational(long long num, long long den, already_reduced_tag) noexcept
      : num_(num), den_(den) {}

  static Rational make_reduced(__int128 num, __int128 den);

  long long num_;
  long long den_;
};

inline Rational abs(const Rational& r) {
  return r < Rational(0) ? -r : r;
}

inline std::string to_string(const Rational& r) { return r.to_string(); }

}  // namespace cograd
