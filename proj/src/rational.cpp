#include "cograd/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cograd {

namespace {

using int128 = __int128;
using uint128 = unsigned __int128;

uint128 abs128(int128 v) { return v < 0 ? static_cast<uint128>(-v) : static_cast<uint128>(v); }

uint128 gcd128(uint128 a, uint128 b) {
  while (b != 0) {
    uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long narrow_or_throw(int128 v, const char* what) {
  if (v > static_cast<int128>(std::numeric_limits<long long>::max()) ||
      v < static_cast<int128>(std::numeric_limits<long long>::min())) {
    throw std::overflow_error(std::string("rational overflow in ") + what +
                              "; rerun on the floating-point path for inputs of this magnitude");
  }
  return static_cast<long long>(v);
}

std::string uint128_to_string(uint128 v) {
  if (v == 0) return "0";
  char buf[48];
  int pos = 48;
  while (v != 0) {
    buf[--pos] = static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  return std::string(buf + pos, buf + 48);
}

}  // namespace

Rational Rational::make_reduced(int128 num, int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational(0);
  const uint128 g = gcd128(abs128(num), static_cast<uint128>(den));
  num /= static_cast<int128>(g);
  den /= static_cast<int128>(g);
  return Rational(narrow_or_throw(num, "reduction"), narrow_or_throw(den, "reduction"),
                  already_reduced_tag{});
}

Rational::Rational(long long num, long long den) {
  *this = make_reduced(num, den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::make_reduced(
      static_cast<int128>(a.num_) * b.den_ + static_cast<int128>(b.num_) * a.den_,
      static_cast<int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::make_reduced(
      static_cast<int128>(a.num_) * b.den_ - static_cast<int128>(b.num_) * a.den_,
      static_cast<int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::make_reduced(static_cast<int128>(a.num_) * b.num_,
                                static_cast<int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return Rational::make_reduced(static_cast<int128>(a.num_) * b.den_,
                                static_cast<int128>(a.den_) * b.num_);
}

Rational Rational::from_decimal(std::string_view text) {
  const auto fail = [&] {
    throw std::invalid_argument("malformed decimal literal: '" + std::string(text) + "'");
  };
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t end = n;
  while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (i >= end) fail();

  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }

  int128 mantissa = 0;
  int digits = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; i < end; ++i) {
    const char c = text[i];
    if (c == '.') {
      if (seen_dot) fail();
      seen_dot = true;
      continue;
    }
    if (c == 'e' || c == 'E') break;
    if (c < '0' || c > '9') fail();
    seen_digit = true;
    if (digits >= 36) throw std::overflow_error("decimal literal has too many digits");
    mantissa = mantissa * 10 + (c - '0');
    ++digits;
    if (seen_dot) ++frac_digits;
  }
  if (!seen_digit) fail();

  long long exponent = 0;
  if (i < end && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < end && (text[i] == '+' || text[i] == '-')) {
      exp_neg = text[i] == '-';
      ++i;
    }
    if (i >= end) fail();
    for (; i < end; ++i) {
      const char c = text[i];
      if (c < '0' || c > '9') fail();
      exponent = exponent * 10 + (c - '0');
      if (exponent > 100) throw std::overflow_error("decimal exponent out of range");
    }
    if (exp_neg) exponent = -exponent;
  }
  if (i != end) fail();

  if (negative) mantissa = -mantissa;
  long long scale = exponent - frac_digits;  // value = mantissa * 10^scale
  int128 num = mantissa;
  int128 den = 1;
  while (scale > 0) {
    num *= 10;
    if (abs128(num) > (uint128(1) << 100)) throw std::overflow_error("decimal literal out of range");
    --scale;
  }
  while (scale < 0) {
    den *= 10;
    if (den > (int128(1) << 100)) throw std::overflow_error("decimal literal out of range");
    ++scale;
  }
  return make_reduced(num, den);
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw std::domain_error("cannot represent a non-finite double exactly");
  if (value == 0.0) return Rational(0);

  int exp = 0;
  const double frac = std::frexp(value, &exp);  // value = frac * 2^exp, |frac| in [0.5, 1)
  long long mant = static_cast<long long>(std::ldexp(frac, 53));
  exp -= 53;
  while (mant != 0 && (mant & 1) == 0) {
    mant >>= 1;
    ++exp;
  }
  if (exp >= 0) {
    const long long magnitude = mant < 0 ? -mant : mant;
    if (exp <= 62 && magnitude <= (std::numeric_limits<long long>::max() >> exp)) {
      return Rational(mant << exp, 1, already_reduced_tag{});
    }
  } else if (-exp <= 62) {
    return Rational(mant, 1LL << (-exp), already_reduced_tag{});
  }

  // Out of exact range: best continued-fraction approximant with bounded terms.
  const bool neg = value < 0;
  double x = std::fabs(value);
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  constexpr long long kLimit = 1LL << 62;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_floor = std::floor(x);
    if (a_floor > static_cast<double>(kLimit)) break;
    const long long a = static_cast<long long>(a_floor);
    if (p1 > (kLimit - p0) / std::max(1LL, a) || q1 > (kLimit - q0) / std::max(1LL, a)) break;
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = x - a_floor;
    if (rem < 1e-18) break;
    x = 1.0 / rem;
  }
  if (q1 == 0) throw std::overflow_error("double out of rational range");
  return Rational(neg ? -p1 : p1, q1);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_decimal_string() const {
  if (den_ == 1) return std::to_string(num_);

  long long d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  const int k = twos > fives ? twos : fives;
  if (d == 1 && k <= 18) {
    // num / (2^a 5^b) == num * 2^(k-a) * 5^(k-b) / 10^k: exact decimal digits.
    uint128 scaled = abs128(num_);
    for (int i = 0; i < k - twos; ++i) scaled *= 2;
    for (int i = 0; i < k - fives; ++i) scaled *= 5;
    std::string digits = uint128_to_string(scaled);
    if (static_cast<int>(digits.size()) <= k) {
      digits.insert(digits.begin(), k + 1 - digits.size(), '0');
    }
    std::string out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
    return (num_ < 0 ? "-" : "") + out;
  }

  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", to_double());
  return buf;
}

}  // namespace cograd
