#include "lshape/rational.hpp"

#include <gtest/gtest.h>

#include "lshape/errors.hpp"

namespace lshape {
namespace {

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational(" -3/9 "), Rational(-1, 3));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("2.5e-1"), Rational(1, 4));
  EXPECT_EQ(parse_rational("1e2"), Rational(100));
}

TEST(Rational, RejectsMalformedInput) {
  EXPECT_THROW(parse_rational("1/0"), DomainError);
  EXPECT_THROW(parse_rational(""), DomainError);
  EXPECT_THROW(parse_rational("abc"), DomainError);
  EXPECT_THROW(parse_rational("1/2/3"), DomainError);
  EXPECT_THROW(parse_rational("nan"), DomainError);
  EXPECT_THROW(parse_rational("0x10"), DomainError);
}

TEST(Rational, LcmOfRationals) {
  EXPECT_EQ(lcm(Rational(2, 3), Rational(2)), Rational(2));
  EXPECT_EQ(lcm(Rational(1), Rational(2)), Rational(2));
  EXPECT_EQ(lcm(Rational(3, 4), Rational(5, 6)), Rational(15, 2));
  EXPECT_THROW(lcm(Rational(0), Rational(1)), DomainError);
}

TEST(Rational, FormatsLowestTerms) {
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
}

}  // namespace
}  // namespace lshape
