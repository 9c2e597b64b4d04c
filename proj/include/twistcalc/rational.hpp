#pragma once

// Exact rational arithmetic on 128-bit integers. Overflow throws instead of
// wrapping; the truncation orders used by the engine keep numerators small,
// so hitting the limit means a logic error upstream, not a capacity problem.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twistcalc {

class arith_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using i128 = __int128;

inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw arith_error("rational overflow in addition");
  return r;
}

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw arith_error("rational overflow in multiplication");
  return r;
}

inline i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string i128_to_string(i128 v);
i128 i128_from_string(std::string_view s);

}  // namespace detail

class Rational {
 public:
  Rational() = default;
  Rational(long long n) : num_(n) {}
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  static Rational from_i128(detail::i128 n, detail::i128 d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
  }

  // Accepts "p", "-p", "p/q".
  static Rational parse(std::string_view s);

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }

  detail::i128 num() const { return num_; }
  detail::i128 den() const { return den_; }

  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    using namespace detail;
    i128 g = gcd128(a.den_, b.den_);
    i128 da = a.den_ / g;
    i128 db = b.den_ / g;
    i128 n = checked_add(checked_mul(a.num_, db), checked_mul(b.num_, da));
    i128 d = checked_mul(a.den_, db);
    return from_i128(n, d);
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    using namespace detail;
    // Cross-reduce before multiplying to keep intermediates small.
    i128 g1 = gcd128(a.num_ < 0 ? -a.num_ : a.num_, b.den_);
    i128 g2 = gcd128(b.num_ < 0 ? -b.num_ : b.num_, a.den_);
    i128 n = checked_mul(g1 ? a.num_ / g1 : a.num_, g2 ? b.num_ / g2 : b.num_);
    i128 d = checked_mul(g2 ? a.den_ / g2 : a.den_, g1 ? b.den_ / g1 : b.den_);
    return from_i128(n, d);
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw arith_error("rational division by zero");
    return from_i128(detail::checked_mul(a.num_, b.den_), detail::checked_mul(a.den_, b.num_));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return detail::checked_mul(a.num_, b.den_) < detail::checked_mul(b.num_, a.den_);
  }

  std::string str() const;

 private:
  detail::i128 num_ = 0;
  detail::i128 den_ = 1;

  void normalize() {
    using namespace detail;
    if (den_ == 0) throw arith_error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    i128 g = gcd128(num_, den_);
    num_ /= g;
    den_ /= g;
  }
};

}  // namespace twistcalc
