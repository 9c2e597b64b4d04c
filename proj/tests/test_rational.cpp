#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistcalc/rational.hpp"

using namespace twistcalc;

TEST_CASE("construction reduces to lowest terms with positive denominator") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(-1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, 7).den() == 1);
  CHECK_THROWS_AS(Rational(1, 0), arith_error);
}

TEST_CASE("field operations") {
  Rational a(3, 4), b(-5, 6);
  CHECK(a + b == Rational(-1, 12));
  CHECK(a - b == Rational(19, 12));
  CHECK(a * b == Rational(-5, 8));
  CHECK(a / b == Rational(-9, 10));
  CHECK(-a == Rational(-3, 4));
  CHECK_THROWS_AS(a / Rational(0), arith_error);
  CHECK(a < Rational(1));
  CHECK(b < a);
}

TEST_CASE("parse and render round-trip") {
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("12") == Rational(12));
  CHECK(Rational::parse("-12") == Rational(-12));
  CHECK(Rational::parse("6/-4") == Rational(-3, 2));
  CHECK(Rational(3, 4).str() == "3/4");
  CHECK(Rational(-3, 4).str() == "-3/4");
  CHECK(Rational(5).str() == "5");
  CHECK(Rational(0).str() == "0");
  CHECK_THROWS_AS(Rational::parse("x"), arith_error);
  CHECK_THROWS_AS(Rational::parse(""), arith_error);
  CHECK_THROWS_AS(Rational::parse("1/"), arith_error);
}

TEST_CASE("large values survive where they fit and throw where they do not") {
  // 2^63 fits easily in 128 bits.
  Rational big = Rational(1LL << 62) * Rational(4);
  CHECK(big.str() == "18446744073709551616");
  CHECK(Rational::parse(big.str()) == big);
  // Squaring repeatedly must eventually throw rather than wrap.
  Rational x = big;
  bool threw = false;
  try {
    for (int i = 0; i < 6; ++i) x = x * x;
  } catch (const arith_error&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("factorial denominators used by series stay exact") {
  Rational sum(0);
  Rational fact(1);
  for (int k = 1; k <= 20; ++k) {
    fact *= Rational(k);
    sum += Rational(1) / fact;
  }
  // sum = (e - 1) truncated at 20 terms; check an exact reconstruction.
  Rational check = sum * fact;
  CHECK(check.is_integer());
}
