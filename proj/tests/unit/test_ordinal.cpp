#include "transfinite/ordinal.hpp"
#include "transfinite/error.hpp"
#include "transfinite/rational.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace transfinite;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

// w^2*a + w*b + c with w replaced by a number larger than every coefficient.
BigInt poly(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return BigInt(a) * 10000 + BigInt(b) * 100 + c; }

Ordinal cnf(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return add(add(mul(omega_pow(2), Ordinal(a)), mul(Ordinal::omega(), Ordinal(b))), Ordinal(c));
}

Ordinal random_below_ww(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(0, 3), expo(0, 4), coef(1, 4);
  Ordinal out;
  for (int i = nterms(rng); i > 0; --i) out = add(out, mul(omega_pow(Ordinal(expo(rng))), Ordinal(coef(rng))));
  return out;
}

}  // namespace

TEST(Ordinal, AddExamples) {
  EXPECT_EQ(add(Ordinal::omega(), 1).str(), "w + 1");
  EXPECT_EQ(add(1, Ordinal::omega()), Ordinal::omega());
  EXPECT_EQ(add(O("w^2 + w"), O("w*2")), O("w^2 + w*3"));
  EXPECT_NE(add(1, Ordinal::omega()), add(Ordinal::omega(), 1));
}

TEST(Ordinal, MulExamples) {
  Ordinal a = O("w^2*3 + 4");
  EXPECT_EQ(mul(a, 1), a);
  EXPECT_EQ(mul(2, Ordinal::omega()), Ordinal::omega());
  EXPECT_EQ(mul(O("w + 1"), Ordinal::omega()), O("w^2"));
  EXPECT_NE(mul(2, Ordinal::omega()), mul(Ordinal::omega(), 2));
  EXPECT_EQ(mul(Ordinal::omega(), 2), O("w*2"));
}

TEST(Ordinal, OmegaPow) {
  EXPECT_EQ(omega_pow(0), Ordinal(1));
  EXPECT_EQ(omega_pow(1), Ordinal::omega());
  EXPECT_EQ(omega_pow(Ordinal::omega()).str(), "w^(w)");
  Ordinal deep = 1;
  EXPECT_THROW(
      {
        for (int i = 0; i < 20; ++i) deep = omega_pow(deep, 6);
      },
      NotationOverflow);
}

TEST(Ordinal, Compare) {
  EXPECT_EQ(compare(O("w^2"), O("w*5 + 3")), Cmp::GT);
  Ordinal a = O("w^3 + w + 2");
  EXPECT_EQ(compare(a, a), Cmp::EQ);
  EXPECT_EQ(compare(O("w + 1"), O("w*2")), Cmp::LT);
}

TEST(Ordinal, Classify) {
  EXPECT_EQ(classify(0), OrdinalKind::Zero);
  EXPECT_EQ(classify(O("w + 3")), OrdinalKind::Successor);
  EXPECT_EQ(classify(O("w*2")), OrdinalKind::Limit);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(classify(add(random_below_ww(rng), 1)), OrdinalKind::Successor);
}

TEST(Ordinal, GodelPair) {
  EXPECT_EQ(godel_pair(0, 0), Ordinal(0));
  EXPECT_EQ(godel_pair(0, 1), Ordinal(1));
  EXPECT_EQ(godel_pair(1, 0), Ordinal(2));
  EXPECT_EQ(godel_pair(1, 1), Ordinal(3));
  EXPECT_EQ(godel_pair(0, 2), Ordinal(4));
  // enumeration oracle: pairs listed by max, then lexicographically
  std::uint64_t pos = 0;
  for (std::uint64_t m = 0; m < 12; ++m)
    for (std::uint64_t a = 0; a <= m; ++a)
      for (std::uint64_t b = 0; b <= m; ++b)
        if (std::max(a, b) == m) EXPECT_EQ(godel_pair(a, b), Ordinal(pos++)) << a << "," << b;
}

TEST(Ordinal, PairingClosure) {
  EXPECT_TRUE(is_pairing_closed(Ordinal::omega(), 100));
  EXPECT_FALSE(is_pairing_closed(O("w*2"), 100));
  EXPECT_TRUE(godel_pair(Ordinal::omega(), Ordinal::omega()) >= O("w*2"));
  EXPECT_TRUE(is_pairing_closed(O("w^w"), 100));
  EXPECT_TRUE(is_pairing_closed(O("w^(w^2)"), 40));
  EXPECT_THROW(is_pairing_closed(0, 10), PreconditionError);
}

TEST(Ordinal, TextRoundTrip) {
  for (const char* s : {"0", "w", "w^2*3 + w*2 + 5", "w^(w)", "w^(w + 1)*2 + w^3 + 7"}) EXPECT_EQ(O(s).str(), s);
  EXPECT_EQ(O("1 + w").str(), "w");
  EXPECT_EQ(O("w^w"), O("w^(w)"));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Ordinal a = random_below_ww(rng);
    EXPECT_EQ(Ordinal::parse(a.str()), a);
  }
  EXPECT_THROW(O("w^"), SyntaxError);
  EXPECT_THROW(O("w + x"), SyntaxError);
}

TEST(Ordinal, Laws) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = random_below_ww(rng), b = random_below_ww(rng), c = random_below_ww(rng);
    ASSERT_EQ(add(add(a, b), c), add(a, add(b, c)));
    ASSERT_EQ(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
    ASSERT_EQ(mul(mul(a, b), c), mul(a, mul(b, c)));
    ASSERT_TRUE(add(a, 1) > a);
  }
}

TEST(Ordinal, CompareMatchesOracleBelowOmegaCubed) {
  for (std::uint64_t a1 = 0; a1 <= 3; ++a1)
    for (std::uint64_t b1 = 0; b1 <= 3; ++b1)
      for (std::uint64_t c1 = 0; c1 <= 3; ++c1)
        for (std::uint64_t a2 = 0; a2 <= 3; ++a2)
          for (std::uint64_t b2 = 0; b2 <= 3; ++b2)
            for (std::uint64_t c2 = 0; c2 <= 3; ++c2) {
              int want = poly(a1, b1, c1).compare(poly(a2, b2, c2));
              Cmp got = compare(cnf(a1, b1, c1), cnf(a2, b2, c2));
              ASSERT_EQ(got, want < 0 ? Cmp::LT : want > 0 ? Cmp::GT : Cmp::EQ);
            }
}

TEST(Ordinal, TruncateAndParts) {
  Ordinal a = O("w^2*2 + w*3 + 4");
  EXPECT_EQ(truncate_below(a, 1), O("w^2*2 + w*3"));
  EXPECT_EQ(truncate_below(a, 2), O("w^2*2"));
  EXPECT_EQ(a.limit_part(), O("w^2*2 + w*3"));
  EXPECT_EQ(a.finite_part(), 4);
  EXPECT_EQ(O("17").to_u64(), 17u);
  EXPECT_FALSE(Ordinal::omega().to_u64());
}

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(format_rational(parse_rational("2/4")), "1/2");
  EXPECT_EQ(format_rational(parse_rational("0.125")), "1/8");
  EXPECT_EQ(format_rational(parse_rational("-3")), "-3");
  EXPECT_EQ(parse_rational_list("1/3, 0").size(), 2u);
  EXPECT_TRUE(parse_rational_list("").empty());
  EXPECT_EQ(frac(parse_rational("7/3")), parse_rational("1/3"));
  EXPECT_EQ(frac(parse_rational("-1/3")), parse_rational("2/3"));
  EXPECT_THROW(parse_rational("1/0"), SyntaxError);
  Rational a = parse_rational("5/7"), b = parse_rational("3/11");
  EXPECT_EQ((a / b) * b, a);
}
