#include <gtest/gtest.h>

#include <random>

#include "circ/rational.hpp"

namespace circ {
namespace {

TEST(RationalTest, CanonicalForm) {
  Rational r(Rational::integer(6), Rational::integer(-8));
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 4);
  EXPECT_EQ(r.str(), "-3/4");
  EXPECT_EQ(Rational(4, 2).str(), "2");
  EXPECT_EQ(Rational(0, 5).str(), "0");
  EXPECT_EQ(Rational(0, 5).denominator(), 1);
}

TEST(RationalTest, ZeroDenominatorThrows) {
  EXPECT_THROW(Rational(1, 0), input_error);
  EXPECT_THROW(Rational(1) / Rational(0), input_error);
}

TEST(RationalTest, Parse) {
  EXPECT_EQ(Rational::parse("1/4"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("2/8"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("-3"), Rational(-3));
  EXPECT_EQ(Rational::parse("010/08"), Rational(5, 4));
  EXPECT_EQ(Rational::parse("000"), Rational(0));
  EXPECT_EQ(Rational::parse("+3/6"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("123456789012345678901234567890/3")->str(), "41152263004115226300411522630");
  for (const char* bad : {"", "/", "1/", "/2", "1/0", "1/-2", "1.5", "a", "1//2", "--1", "1/2/3", " 1"}) {
    EXPECT_FALSE(Rational::parse(bad)) << bad;
  }
}

TEST(RationalTest, Ordering) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
}

TEST(RationalTest, DecimalRendering) {
  EXPECT_EQ(Rational(3, 4).decimal(), "0.75");
  EXPECT_EQ(Rational(1, 3).decimal(), "0.333333333333");
  EXPECT_EQ(Rational(2, 3).decimal(), "0.666666666667");
  EXPECT_EQ(Rational(1).decimal(), "1");
  EXPECT_EQ(Rational(0).decimal(), "0");
  EXPECT_EQ(Rational(-1, 8).decimal(), "-0.125");
  EXPECT_EQ(Rational(1, 100000).decimal(), "1e-05");
  EXPECT_EQ(Rational(1, 10000).decimal(), "0.0001");
  EXPECT_EQ(Rational(1, 6).decimal(), "0.166666666667");
  // rounding carries into a new leading digit
  EXPECT_EQ(Rational(Rational::integer("9999999999999"), Rational::integer("10000000000000")).decimal(), "1");
  EXPECT_EQ(Rational(Rational::integer("123456789012345"), Rational::integer(1)).decimal(), "1.23456789012e+14");
}

TEST(RationalTest, ArithmeticRoundTripProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 30);
  for (int i = 0; i < 2000; ++i) {
    Rational a(num(rng), den(rng));
    Rational b(num(rng), den(rng));
    EXPECT_EQ((a + b) - b, a);
    if (!b.is_zero()) {
      EXPECT_EQ((a * b) / b, a);
    }
    auto sum = a + b;
    EXPECT_EQ(gcd(abs(sum.numerator()), sum.denominator()), 1);
    EXPECT_GT(sum.denominator(), 0);
    EXPECT_EQ(Rational::parse(a.str()), a);
  }
}

} // namespace
} // namespace circ
