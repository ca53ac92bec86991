#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wco/error.hpp"

namespace wco {

using Rational = mpq_class;
using Integer = mpz_class;

/// Index of an atom; atoms are numbered from 0.
using Atom = std::size_t;

template <class S>
struct Field;

template <>
struct Field<Rational> {
  static constexpr bool exact = true;
  static constexpr std::string_view name = "rational";

  static Rational from_integer(const Integer& z) { return Rational(z); }
  static Rational from_int(long v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.get_d(); }

  static int sign(const Rational& v, double /*tolerance*/) { return sgn(v); }
  static bool near(const Rational& a, const Rational& b, double /*tolerance*/) { return a == b; }

  static std::string format(const Rational& v) { return v.get_str(); }

  static Rational pow(const Rational& base, long exponent) {
    if (exponent == 0) return Rational(1);
    if (exponent < 0) {
      if (base == 0) throw Error(ErrorKind::infinite_value, "zero raised to a negative power");
      return pow(Rational(1) / base, -exponent);
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    Rational out(num, den);
    out.canonicalize();
    return out;
  }
};

template <>
struct Field<double> {
  static constexpr bool exact = false;
  static constexpr std::string_view name = "float";

  static double from_integer(const Integer& z) { return z.get_d(); }
  static double from_int(long v) { return static_cast<double>(v); }
  static double to_double(double v) { return v; }

  static int sign(double v, double tolerance) {
    if (std::fabs(v) <= tolerance) return 0;
    return v > 0 ? 1 : -1;
  }
  static bool near(double a, double b, double tolerance) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tolerance * scale;
  }

  /// Shortest decimal that round-trips.
  static std::string format(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }

  static double pow(double base, long exponent) { return std::pow(base, static_cast<double>(exponent)); }
};

template <class S>
inline constexpr bool is_exact_v = Field<S>::exact;

/// Row n of Pascal's triangle, exact.
inline std::vector<Integer> binomial_row(unsigned n) {
  std::vector<Integer> row{Integer(1)};
  for (unsigned r = 1; r <= n; ++r) {
    std::vector<Integer> next(r + 1);
    next[0] = 1;
    next[r] = 1;
    for (unsigned i = 1; i < r; ++i) next[i] = row[i - 1] + row[i];
    row = std::move(next);
  }
  return row;
}

/// Signed binomial weights (-1)^i C(n,i), i = 0..n, converted to S.
template <class S>
std::vector<S> alternating_binomials(unsigned n) {
  const auto row = binomial_row(n);
  std::vector<S> out;
  out.reserve(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    Integer z = (i % 2 == 0) ? row[i] : Integer(-row[i]);
    out.push_back(Field<S>::from_integer(z));
  }
  return out;
}

/// A value in [0, +inf] (or a signed finite value). Infinity only ever arises
/// from divergent nonnegative series.
template <class S>
class Extended {
 public:
  Extended() : value_(0) {}
  Extended(S v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)

  static Extended infinity() {
    Extended e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  const S& value() const {
    if (infinite_) throw Error(ErrorKind::infinite_value, "value is +inf");
    return value_;
  }

  friend Extended operator+(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) {
      // +inf absorbs addition; a negative finite partner is still fine since the
      // infinite side only comes from divergent nonnegative sums.
      return infinity();
    }
    return Extended(S(a.value_ + b.value_));
  }

  /// Multiplication with 0 * inf = 0.
  friend Extended operator*(const Extended& a, const Extended& b) {
    if (!a.infinite_ && !b.infinite_) return Extended(S(a.value_ * b.value_));
    const Extended& other = a.infinite_ ? b : a;
    if (other.infinite_) return infinity();
    if (other.value_ == 0) return Extended(S(0));
    if (other.value_ < 0) throw Error(ErrorKind::infinite_value, "negative multiple of +inf");
    return infinity();
  }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  std::string str() const { return infinite_ ? std::string("inf") : Field<S>::format(value_); }

 private:
  S value_;
  bool infinite_ = false;
};

template <class S>
bool near(const Extended<S>& a, const Extended<S>& b, double tolerance) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
  return Field<S>::near(a.value(), b.value(), tolerance);
}

}  // namespace wco
