#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace wco;
using namespace wco::test;

namespace {

const AuditResult& audit(const ClassificationReport<Rational>& r, const std::string& name) {
  for (const auto& a : r.audits)
    if (a.name == name) return a;
  throw std::runtime_error("no audit " + name);
}

}  // namespace

TEST(Classify, IdentityIsIsometric) {
  ClassifyOptions opt;
  opt.max_order = 3;
  const auto r = classify(example("identity"), opt);
  ASSERT_EQ(r.orders.size(), 3u);
  for (const auto& v : r.orders) {
    EXPECT_EQ(v.status, Status::yes);
    EXPECT_TRUE(v.isometry);
    EXPECT_TRUE(v.expansive);
  }
  EXPECT_TRUE(r.dense.dense);
  EXPECT_EQ(r.invariance.status, Status::yes);
  EXPECT_EQ(r.invariance.c_star, std::optional<Rational>(q("1/2")));
  EXPECT_EQ(r.hyperexpansive_up_to, 3u);
  EXPECT_TRUE(r.alternating.pass);
  EXPECT_TRUE(r.alternating.certified);
  EXPECT_TRUE(r.findings().empty());
}

TEST(Classify, S1IsNotExpansive) {
  ClassifyOptions opt;
  opt.max_order = 2;
  const auto r = classify(s1(), opt);
  EXPECT_FALSE(r.orders[0].expansive);
  EXPECT_EQ(r.orders[0].witness, std::optional<Atom>(2));
  EXPECT_EQ(r.orders[0].margin, std::optional<Rational>(1));
  EXPECT_EQ(r.invariance.c_star, std::optional<Rational>(q("7/4")));
  EXPECT_EQ(r.hyperexpansive_up_to, 0u);
  EXPECT_FALSE(audit(r, "two_expansive_gap_inequality").applicable);
}

TEST(Classify, VerdictsFollowReferenceDelta) {
  std::mt19937_64 rng(31);
  ClassifyOptions opt;
  opt.max_order = 4;
  for (int trial = 0; trial < 200; ++trial) {
    const auto sys = validate(random_finite_system(rng, 1 + trial % 6));
    const auto r = classify(sys, opt);
    for (unsigned n = 1; n <= 4; ++n) {
      const auto d = reference_delta(sys, n);
      const bool expansive = std::all_of(d.begin(), d.end(), [](const Rational& x) { return x <= 0; });
      const bool isometry = std::all_of(d.begin(), d.end(), [](const Rational& x) { return x == 0; });
      ASSERT_EQ(r.orders[n - 1].expansive, expansive);
      ASSERT_EQ(r.orders[n - 1].isometry, isometry);
    }
    ASSERT_TRUE(r.findings().empty());
  }
}

TEST(Classify, StarTailDivergenceBlocksEverything) {
  const auto r = classify(example("star-tail", {"1", "1"}));
  EXPECT_FALSE(r.dense.dense);
  EXPECT_EQ(r.dense.witness, std::optional<Atom>(0));
  for (const auto& v : r.orders) EXPECT_EQ(v.status, Status::blocked);
  EXPECT_EQ(r.invariance.status, Status::blocked);
  EXPECT_TRUE(r.alternating.blocked);
}

TEST(Classify, StarTailConvergent) {
  const auto r = classify(example("star-tail", {"1/2", "1"}));
  EXPECT_TRUE(r.dense.dense);
  EXPECT_EQ(r.jt[1].at(0), Extended<Rational>(q("2")));
  // Delta_1(0) = 1 - 2 < 0; every tail atom has J_1 = 0, so Delta_1 = 1 there.
  EXPECT_FALSE(r.orders[0].expansive);
  EXPECT_EQ(r.orders[0].witness, std::optional<Atom>(1));
  EXPECT_EQ(r.orders[0].tail_sign, std::optional<SignKind>(SignKind::nonnegative));
}

TEST(Classify, ConstantMultiplierDelta) {
  // J_i = c^{2i}, Delta_n = (1 - c^2)^n.
  for (const char* c : {"1", "1/2", "3", "-1"}) {
    const auto sys = example("constant-mult", {c});
    const auto r = classify(sys);
    const Rational usq = q(c) * q(c);
    for (unsigned n = 1; n <= 4; ++n) {
      const Rational expect = Field<Rational>::pow(Rational(1 - usq), n);
      EXPECT_EQ(r.orders[n - 1].margin, std::optional<Rational>(expect));
      EXPECT_EQ(r.orders[n - 1].isometry, usq == 1);
    }
  }
}

TEST(Classify, DirichletWindowIsCompletelyAlternating) {
  const auto sys = example("dirichlet", {"12"});
  ClassifyOptions opt;
  opt.max_order = 5;
  const auto r = classify(sys, opt);
  const auto& jt = r.jt;
  // Interior window: atoms whose J values up to order 8 do not feel the truncation.
  for (Atom k = 1; k + 8 <= 11; ++k) {
    EXPECT_LT(delta(jt, 1).at(k).value(), 0);
    for (unsigned i = 2; i <= 5; ++i) EXPECT_EQ(delta(jt, i).at(k).value(), 0) << "i=" << i << " k=" << k;
  }
  for (Atom k = 0; k + 8 <= 11; ++k) EXPECT_TRUE(r.alternating.atoms[k].pass) << "k=" << k;
}

TEST(Classify, TwoCycleIsUnitary) {
  const auto r = classify(example("two-cycle"));
  EXPECT_TRUE(r.second_order.expansive);
  const auto& a = audit(r, "bijective_unitary");
  EXPECT_TRUE(a.applicable);
  EXPECT_TRUE(a.holds);
}

TEST(Classify, TwoExpansiveAuditsHoldOnRandomSystems) {
  std::mt19937_64 rng(32);
  int applicable = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto w = random_finite_system(rng, 1 + trial % 4);
    // Push weights towards 1 so that 2-expansive systems are common.
    if (trial % 2 == 0) std::fill(w.usq.begin(), w.usq.end(), Rational(1));
    const auto r = classify(validate(w));
    ASSERT_TRUE(r.findings().empty()) << r.findings().front();
    if (audit(r, "two_expansive_gap_inequality").applicable) ++applicable;
  }
  EXPECT_GT(applicable, 50);
}

TEST(Classify, ShiftTailIsometry) {
  // Unilateral shift 0 <- 1 <- 2 <- ... with unit masses: phi(k) = k - 1 on the
  // tail, 0 fixed with u_0 = 0. J_1 = 1 except at the end of the chain.
  WeightedSystem<Rational> w{qs({"1"}), {0}, qs({"0"}), std::nullopt};
  w.tail = TailSpec<Rational>{{q("1"), q("1")}, {q("1"), q("1")}, TailMap::shift_down(1)};
  const auto r = classify(validate(w));
  EXPECT_TRUE(r.dense.dense);
  EXPECT_EQ(r.jt[1].at(0).value(), 1);
  EXPECT_EQ(r.jt[1].at(100).value(), 1);
  EXPECT_TRUE(r.orders[0].isometry);
  EXPECT_TRUE(r.findings().empty());
}

TEST(Classify, InvarianceFailsWhenTailOutgrowsJ1) {
  // Weighted backward shift whose weights grow: J_2 / (1 + J_1) is unbounded.
  WeightedSystem<Rational> w{qs({"1"}), {0}, qs({"0"}), std::nullopt};
  w.tail = TailSpec<Rational>{{q("1"), q("1")}, {q("1"), q("2")}, TailMap::shift_down(1)};
  const auto r = classify(validate(w));
  EXPECT_TRUE(r.dense.dense);
  EXPECT_EQ(r.invariance.status, Status::no);
}
