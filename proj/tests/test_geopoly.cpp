#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace wco;
using wco::test::q;
using P = GeoPoly<Rational>;
using Term = P::Term;

TEST(GeoPoly, NormalizeSortsMergesAndDropsZeros) {
  const P p({Term{q("1"), q("1/2")}, Term{q("2"), q("1")}, Term{q("-1"), q("1/2")}, Term{q("3"), q("1/3")}});
  ASSERT_EQ(p.terms().size(), 2u);
  EXPECT_EQ(p.terms()[0].ratio, q("1"));
  EXPECT_EQ(p.terms()[0].coeff, q("2"));
  EXPECT_EQ(p.terms()[1].ratio, q("1/3"));
  EXPECT_TRUE((p - p).is_zero());
}

TEST(GeoPoly, RejectsNonpositiveRatio) {
  EXPECT_THROW(P::single(q("1"), q("0")), Error);
  EXPECT_THROW(P::single(q("1"), q("-1/2")), Error);
}

TEST(GeoPoly, EvaluationMatchesTermwisePowers) {
  const P p({Term{q("3"), q("2/3")}, Term{q("-1/2"), q("5/4")}});
  for (long k = -3; k <= 12; ++k) {
    const Rational expect = q("3") * Field<Rational>::pow(q("2/3"), k) - q("1/2") * Field<Rational>::pow(q("5/4"), k);
    EXPECT_EQ(p(k), expect) << "k = " << k;
  }
}

TEST(GeoPoly, ArithmeticIsPointwise) {
  const P a({Term{q("2"), q("1/2")}, Term{q("1"), q("1")}});
  const P b({Term{q("-1"), q("3")}, Term{q("1/3"), q("1/2")}});
  const P prod = a * b, sum = a + b, shift = a.shifted(3);
  for (long k = 0; k < 10; ++k) {
    EXPECT_EQ(prod(k), a(k) * b(k));
    EXPECT_EQ(sum(k), a(k) + b(k));
    EXPECT_EQ(shift(k), a(k + 3));
  }
}

TEST(GeoPoly, SignOfMixedPolynomialFindsFirstPositiveAtom) {
  // 1 - 2 (1/2)^k: -1, 0, 1/2, 3/4, ...
  const P p({Term{q("1"), q("1")}, Term{q("-2"), q("1/2")}});
  const auto r = geopoly_sign(p, 0);
  EXPECT_EQ(r.kind, SignKind::mixed);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, 2);
}

TEST(GeoPoly, SignKinds) {
  EXPECT_EQ(geopoly_sign(P(), 0).kind, SignKind::zero);
  EXPECT_EQ(geopoly_sign(P::single(q("-1"), q("1/3")), 0).kind, SignKind::nonpositive);
  EXPECT_EQ(geopoly_sign(P::single(q("2"), q("3")), 5).kind, SignKind::nonnegative);
  // (1/2)^k - 1 is zero at k = 0 and negative afterwards.
  const auto r = geopoly_sign(P({Term{q("1"), q("1/2")}, Term{q("-1"), q("1")}}), 0);
  EXPECT_EQ(r.kind, SignKind::nonpositive);
  EXPECT_EQ(r.max_value, 0);
}

TEST(GeoPoly, LateCrossoverIsFound) {
  // (1/100) - (99/100)^k turns positive only once (99/100)^k < 1/100, at k = 459.
  const P p({Term{q("1/100"), q("1")}, Term{q("-1"), q("99/100")}});
  const auto r = geopoly_sign(p, 0);
  ASSERT_TRUE(r.witness);
  long first = 0;
  while (p(first) <= 0) ++first;
  EXPECT_EQ(static_cast<long>(*r.witness), first);
  EXPECT_EQ(first, 459);
}

TEST(GeoPoly, SignAgreesWithScanOnRandomPolynomials) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coeff(-6, 6), num(1, 9), den(1, 9), count(1, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Term> terms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      Rational c(coeff(rng)), r(num(rng), den(rng));
      r.canonicalize();
      terms.push_back(Term{c, r});
    }
    const P p(terms);
    const auto report = geopoly_sign(p, 0);
    std::optional<long> first;
    bool any_negative = false;
    for (long k = 0; k <= 200; ++k) {
      if (!first && p(k) > 0) first = k;
      any_negative = any_negative || p(k) < 0;
    }
    if (report.witness) {
      ASSERT_TRUE(p(static_cast<long>(*report.witness)) > 0) << p.str();
      for (long k = 0; k < static_cast<long>(*report.witness); ++k) ASSERT_TRUE(p(k) <= 0) << p.str();
    } else {
      ASSERT_FALSE(first) << p.str();
    }
    if (report.kind == SignKind::nonpositive) {
      ASSERT_FALSE(first) << p.str();
    }
    if (report.kind == SignKind::nonnegative) {
      ASSERT_FALSE(any_negative) << p.str();
    }
  }
}
