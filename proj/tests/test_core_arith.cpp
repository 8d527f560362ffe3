#include <gtest/gtest.h>

#include <cmath>

#include "random_util.hpp"
#include "schmidt/enclosure.hpp"
#include "schmidt/interval.hpp"
#include "schmidt/json_io.hpp"

using namespace schmidt;
using testutil::any_rational;
using testutil::uniform;

TEST(Rational, LowestTermsAndSign) {
  Rational r(6, -8);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 4);
  EXPECT_EQ(r.str(), "-3/4");
  EXPECT_EQ(Rational(0, 5).str(), "0/1");
  EXPECT_EQ(Rational(10, 5).str(), "2/1");
  EXPECT_THROW(Rational(1, 0), DomainError);
  EXPECT_THROW(Rational(1) / Rational(0), DomainError);
}

TEST(Rational, FieldAxiomsOnRandomValues) {
  for (int i = 0; i < 5000; ++i) {
    Rational a = any_rational(1000000, 1000000), b = any_rational(1000000, 1000000);
    EXPECT_EQ((a + b) - b, a);
    if (!b.is_zero()) {
      EXPECT_EQ((a * b) / b, a);
    }
    EXPECT_EQ(a * (b + Rational(1)), a * b + a);
    // representation is canonical: equal values print identically
    Rational c(a.num() * 7, a.den() * 7);
    EXPECT_EQ(c.str(), a.str());
  }
}

TEST(Rational, ParseIsExact) {
  EXPECT_EQ(parse_rational("1e-8"), Rational(Integer(1), Integer("100000000")));
  EXPECT_EQ(parse_rational("0.531"), Rational(531, 1000));
  EXPECT_EQ(parse_rational("-1.5e3"), Rational(-1500));
  EXPECT_EQ(parse_rational("24/49"), Rational(24, 49));
  EXPECT_EQ(parse_rational("0/1"), Rational(0));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("abc"), ConfigError);
  EXPECT_THROW(parse_rational("1/0"), std::exception);
  EXPECT_THROW(parse_rational(""), ConfigError);
}

TEST(Rational, JsonForm) {
  EXPECT_EQ(to_json(Rational(2, 4)).get<std::string>(), "1/2");
  EXPECT_EQ(to_json(Interval(Rational(0), Rational(1, 3))).dump(), R"(["0/1","1/3"])");
  EXPECT_EQ(rational_from_json(Json("3/9")), Rational(1, 3));
  EXPECT_EQ(interval_from_json(Json::array({"1/4", "1/2"})), Interval(Rational(1, 4), Rational(1, 2)));
}

TEST(Interval, RelateExamples) {
  auto r = interval_relate({0, 1}, {2, 3});
  EXPECT_TRUE(r.disjoint);
  EXPECT_FALSE(r.touching);
  EXPECT_EQ(r.gap, Rational(1));

  r = interval_relate({0, 1}, {1, 2});
  EXPECT_FALSE(r.disjoint);
  EXPECT_TRUE(r.touching);
  EXPECT_EQ(r.gap, Rational(0));

  r = interval_relate({0, 1}, {Rational(1, 4), Rational(1, 2)});
  EXPECT_TRUE(r.contained);
  EXPECT_TRUE(r.second_in_first);
  EXPECT_FALSE(r.touching);
  EXPECT_EQ(r.gap, Rational(0));
}

TEST(Interval, GapIsSymmetricAndMatchesFormula) {
  for (int i = 0; i < 5000; ++i) {
    Rational a = any_rational(50, 20), b = any_rational(50, 20), c = any_rational(50, 20), d = any_rational(50, 20);
    Interval I(min(a, b), max(a, b)), J(min(c, d), max(c, d));
    auto r1 = interval_relate(I, J), r2 = interval_relate(J, I);
    EXPECT_EQ(r1.gap, r2.gap);
    EXPECT_EQ(r1.disjoint, r2.disjoint);
    EXPECT_EQ(r1.touching, r2.touching);
    Rational g = max(Rational(0), max(J.lo - I.hi, I.lo - J.hi));
    EXPECT_EQ(r1.gap, g);
    if (r1.touching) {
      EXPECT_TRUE(I.hi == J.lo || J.hi == I.lo);
    }
  }
}

TEST(Interval, CenterRadiusViews) {
  Interval I(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(I.center(), Rational(5, 12));
  EXPECT_EQ(I.radius(), Rational(1, 12));
  EXPECT_EQ(Interval::ball(I.center(), I.radius()), I);
  EXPECT_THROW(Interval(Rational(1), Rational(0)), DomainError);
}

TEST(Ball2, SupNorm) {
  Ball2 B(Rational(0), Rational(0), Rational(1));
  EXPECT_TRUE(B.contains(Rational(1), Rational(1)));  // corner of the square
  EXPECT_TRUE(B.contains(Rational(-1), Rational(1, 2)));
  EXPECT_FALSE(B.contains(Rational(11, 10), Rational(0)));
  EXPECT_THROW(Ball2(Rational(0), Rational(0), Rational(-1)), DomainError);
}

// base-3 long division on machine integers
static std::vector<int> digits_oracle(long p, long q, std::size_t n) {
  std::vector<int> d;
  for (std::size_t i = 0; i < n; ++i) {
    p *= 3;
    d.push_back(static_cast<int>(p / q));
    p %= q;
  }
  return d;
}

TEST(Ternary, Examples) {
  auto t = ternary_digits(Rational(1, 3), 4);
  EXPECT_EQ(t.digits, (std::vector<int>{1, 0, 0, 0}));
  EXPECT_TRUE(t.exact);

  t = ternary_digits(Rational(3, 4), 6);
  EXPECT_EQ(t.digits, (std::vector<int>{2, 0, 2, 0, 2, 0}));
  EXPECT_FALSE(t.exact);
  EXPECT_EQ(t.digits, digits_oracle(3, 4, 6));

  t = ternary_digits(Rational(1), 3);
  EXPECT_EQ(t.integer_part, 1);
  EXPECT_EQ(t.digits, (std::vector<int>{0, 0, 0}));
  EXPECT_TRUE(t.exact);

  EXPECT_THROW(ternary_digits(Rational(-1, 2), 3), DomainError);
  EXPECT_THROW(ternary_digits(Rational(3, 2), 3), DomainError);
}

TEST(Ternary, TruncationErrorAndOracle) {
  for (int i = 0; i < 3000; ++i) {
    long q = uniform(1, 5000), p = uniform(0, q - 1);
    std::size_t n = static_cast<std::size_t>(uniform(1, 30));
    Rational x(p, q);
    auto t = ternary_digits(x, n);
    EXPECT_EQ(t.digits, digits_oracle(p, q, n));
    Rational err = x - ternary_value(t.digits);
    EXPECT_GE(err, Rational(0));
    EXPECT_LT(err, pow(Rational(1, 3), static_cast<long>(n)));
    EXPECT_EQ(t.exact, err.is_zero());
  }
}

TEST(Enclosure, LogAndExpContainTrueValues) {
  for (int i = 0; i < 200; ++i) {
    Rational x(uniform(1, 100000), uniform(1, 1000));
    Enclosure L = log_enc(x, 96);
    double ref = std::log(x.to_double());
    EXPECT_LE(L.lo.to_double(), ref + 1e-12);
    EXPECT_GE(L.hi.to_double(), ref - 1e-12);
    EXPECT_LT(L.width(), pow2(-80));
    Enclosure E = exp_enc(L, 96);
    EXPECT_TRUE(E.lo <= x && x <= E.hi);
  }
}

TEST(Enclosure, ExactLogRatios) {
  EXPECT_EQ(exact_log_ratio(Rational(2), Rational(4)), Rational(1, 2));
  EXPECT_EQ(exact_log_ratio(Rational(27), Rational(9)), Rational(3, 2));
  EXPECT_FALSE(exact_log_ratio(Rational(2), Rational(3)).has_value());
  Enclosure e = log_ratio_enc(Rational(2), Rational(3), 96);
  EXPECT_NEAR(e.mid().to_double(), std::log(2.0) / std::log(3.0), 1e-15);
}

TEST(Enclosure, RootAndPowers) {
  Enclosure r = root_enc(Rational(1, 8), 2, 96);
  EXPECT_LE(r.lo * r.lo, Rational(1, 8));
  EXPECT_GE(r.hi * r.hi, Rational(1, 8));
  Enclosure p = pow_enc(Rational(8), Rational(2, 3), 96);
  EXPECT_TRUE(p.contains(Rational(4)));
}
