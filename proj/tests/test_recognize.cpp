#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>

#include "gscat/precision.hpp"
#include "gscat/recognize.hpp"

using namespace gscat;

TEST(Rational, ContinuedFractions) {
  EXPECT_EQ(recognize_rational(0.75, 64, 1e-8), (Rational{3, 4}));
  EXPECT_EQ(recognize_rational(-1.0 / 3, 64, 1e-8), (Rational{-1, 3}));
  EXPECT_EQ(recognize_rational(2.0, 64, 1e-8), (Rational{2, 1}));
  EXPECT_EQ(recognize_rational(5.0 / 8 + 1e-10, 64, 1e-8), (Rational{5, 8}));
  EXPECT_FALSE(recognize_rational(std::sqrt(2.0), 64, 1e-8));
  EXPECT_FALSE(recognize_rational(1.0 / 97, 64, 1e-8));  // denominator too large
  EXPECT_EQ(recognize_rational(1.0 / 97, 100, 1e-12), (Rational{1, 97}));
}

TEST(Surd, RecognisesRationalsAndRoots) {
  const quad r2 = boost::multiprecision::sqrt(quad(2));
  const auto s = recognize_quadratic_surd(quad(5) - 2 * r2, 2000, 1e-20);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->str(), "5-2*sqrt(2)");
  EXPECT_EQ(s->a, 1);
  EXPECT_EQ(s->b, -10);
  EXPECT_EQ(s->c, 17);

  const auto half = recognize_quadratic_surd(quad(1) / 2, 2000, 1e-20);
  ASSERT_TRUE(half);
  EXPECT_TRUE(half->is_rational());
  EXPECT_EQ(half->str(), "1/2");

  const auto four = recognize_quadratic_surd(quad(4), 2000, 1e-20);
  ASSERT_TRUE(four);
  EXPECT_EQ(four->str(), "4");
}

TEST(Surd, LongestLengthClosedForm) {
  const quad x = quad(350) + 156 * boost::multiprecision::sqrt(quad(5));
  const auto s = recognize_quadratic_surd(x, 2000, 1e-20);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->str(), "350+156*sqrt(5)");
  EXPECT_NEAR(s->value(), 350 + 156 * std::sqrt(5.0), 1e-9);
}

TEST(Surd, TranscendentalsAreRejected) {
  EXPECT_FALSE(recognize_quadratic_surd(boost::math::constants::pi<quad>(), 2000, 1e-20));
  EXPECT_FALSE(recognize_quadratic_surd(boost::math::constants::e<quad>(), 2000, 1e-20));
}

TEST(Surd, PicksTheRootNearestTheValue) {
  // 5 + 2 sqrt 2 solves the same relation as 5 - 2 sqrt 2
  const quad x = quad(5) + 2 * boost::multiprecision::sqrt(quad(2));
  const auto s = recognize_quadratic_surd(x, 2000, 1e-20);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->str(), "5+2*sqrt(2)");
}
