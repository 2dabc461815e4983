#include <gtest/gtest.h>

#include "cgm/rational.hpp"

using cgm::parse_rational;
using cgm::Rational;

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(*parse_rational("80"), Rational(80));
  EXPECT_EQ(*parse_rational("-7/2"), Rational(-7, 2));
  EXPECT_EQ(*parse_rational("14/4"), Rational(7, 2));
  EXPECT_EQ(*parse_rational("3.5"), Rational(7, 2));
  EXPECT_EQ(*parse_rational("80/1"), Rational(80));
}

TEST(Rational, ZeroDenominatorIsReported) {
  std::string error;
  EXPECT_FALSE(parse_rational("1/0", &error));
  EXPECT_EQ(error, "zero denominator");
}

TEST(Rational, MalformedTextIsRejected) {
  for (const char* bad : {"", "abc", "1/", "/2", "1.2.3", "1/2/3", "--1"}) {
    std::string error;
    EXPECT_FALSE(parse_rational(bad, &error)) << bad;
    EXPECT_FALSE(error.empty()) << bad;
  }
}

TEST(Rational, CanonicalText) {
  EXPECT_EQ(cgm::to_string(Rational(80)), "80");
  EXPECT_EQ(cgm::to_string(Rational(-14) / 4), "-7/2");
  EXPECT_EQ(cgm::to_string(Rational(0)), "0");
  for (const Rational& v : {Rational(5), Rational(-3, 7), Rational(123456789, 1000)}) {
    EXPECT_EQ(*parse_rational(cgm::to_string(v)), v);
  }
}
