#include "okutsu/rational.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace okutsu;

TEST(Rational, ParsesFractionsAndIntegers)
{
    EXPECT_EQ(parse_rational("3/4"), make_rational(3, 4));
    EXPECT_EQ(parse_rational("-6/4"), make_rational(-3, 2));
    EXPECT_EQ(parse_rational("7"), Rational(7));
    EXPECT_EQ(parse_rational("-2"), Rational(-2));
}

TEST(Rational, RejectsMalformedText)
{
    EXPECT_THROW(parse_rational("4/0"), NumberFormatError);
    EXPECT_THROW(parse_rational("3/-4"), NumberFormatError);
    EXPECT_THROW(parse_rational(""), NumberFormatError);
    EXPECT_THROW(parse_rational("1.5"), NumberFormatError);
    EXPECT_THROW(parse_rational("1/2/3"), NumberFormatError);
    EXPECT_THROW(parse_rational("abc"), NumberFormatError);
}

TEST(Rational, FormatsCanonically)
{
    EXPECT_EQ(to_string(make_rational(6, 4)), "3/2");
    EXPECT_EQ(to_string(Rational(5)), "5/1");
    EXPECT_EQ(to_display(Rational(5)), "5");
    EXPECT_EQ(to_display(make_rational(-1, 3)), "-1/3");
}

TEST(Rational, FloorRoundsTowardMinusInfinity)
{
    EXPECT_EQ(floor_of(make_rational(-3, 2)), -2);
    EXPECT_EQ(floor_of(make_rational(7, 3)), 2);
    EXPECT_EQ(floor_of(Rational(-4)), -4);
    EXPECT_EQ(floor_of(make_rational(-1, 7)), -1);
    EXPECT_TRUE(is_integer(Rational(3)));
    EXPECT_FALSE(is_integer(make_rational(1, 3)));
}

TEST(Rational, TextRoundTripOnRandomValues)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> num(-1000, 1000), den(1, 500);
    for (int t = 0; t < 500; ++t) {
        const Rational r = make_rational(num(rng), den(rng));
        EXPECT_EQ(parse_rational(to_string(r)), r);
        EXPECT_EQ(parse_rational(to_display(r)), r);
        EXPECT_LE(Rational(floor_of(r)), r);
        EXPECT_GT(Rational(floor_of(r) + 1), r);
    }
}

TEST(ExtValue, InfinityDominatesAndSaturates)
{
    const ExtValue inf = ExtValue::infinity();
    const ExtValue three(Rational(3));
    EXPECT_GT(inf, three);
    EXPECT_EQ(std::min(inf, three), three);
    EXPECT_TRUE((inf + three).is_infinite());
    EXPECT_TRUE((inf - Rational(5)).is_infinite());
    EXPECT_TRUE((2 * inf).is_infinite());
    EXPECT_EQ(0 * inf, ExtValue(Rational(0)));
    EXPECT_EQ(inf, ExtValue::infinity());
    EXPECT_THROW((void)inf.value(), std::logic_error);
}

TEST(ExtValue, FiniteArithmeticIsExact)
{
    const ExtValue a(make_rational(1, 3));
    const ExtValue b(make_rational(1, 6));
    EXPECT_EQ(a + b, ExtValue(make_rational(1, 2)));
    EXPECT_EQ(a - make_rational(1, 3), ExtValue(Rational(0)));
    EXPECT_EQ(3 * a, ExtValue(Rational(1)));
    EXPECT_LT(b, a);
}

TEST(ExtValue, TextForm)
{
    EXPECT_EQ(ExtValue::infinity().str(), "inf");
    EXPECT_EQ(ExtValue(Rational(18)).str(), "18");
    EXPECT_EQ(parse_ext_value("inf"), ExtValue::infinity());
    EXPECT_EQ(parse_ext_value("5/2"), ExtValue(make_rational(5, 2)));
}
