#include <gtest/gtest.h>

#include "cdperc/peierls.hpp"
#include "cdperc/perm_oracle.hpp"
#include "cdperc/tree.hpp"

using namespace cdperc;

namespace {

void expect_rational(const Rational& r, std::uint64_t num, std::uint64_t den) {
  EXPECT_EQ(r.num(), num) << r;
  EXPECT_EQ(r.den(), den) << r;
}

}  // namespace

TEST(Rational, Arithmetic) {
  expect_rational(Rational{2, 4}, 1, 2);
  expect_rational(Rational{1, 6} + Rational{1, 3}, 1, 2);
  expect_rational(Rational{2, 3} * Rational{3, 4}, 1, 2);
  expect_rational(Rational{1, 2} / Rational{1, 4}, 2, 1);
  EXPECT_TRUE(Rational(1, 3) < Rational(1, 2));
  EXPECT_THROW(Rational(1, 0), std::invalid_argument);
  EXPECT_THROW(RationalProb(3, 2), std::invalid_argument);
}

TEST(PermOracle, Constants) {
  const auto shared = perm_oracle(PermCase::shared_frontal);
  expect_rational(shared.value(), 2, 15);
  expect_rational(perm_oracle(PermCase::case_one).value(), 439, 18144);
  expect_rational(perm_oracle(PermCase::case_two).value(), 289, 12096);
  expect_rational(kCaseOneLate, 439, 18144);
  expect_rational(kCaseTwoLate, 289, 12096);
  expect_rational(kSharedFrontalLate, 2, 15);
}

TEST(PermOracle, AnyRuleIsLarger) {
  for (PermCase c : {PermCase::shared_frontal, PermCase::case_one, PermCase::case_two})
    EXPECT_TRUE(perm_oracle(c).value() < perm_oracle(c, BlockerRule::any).value());
}

TEST(PermOracle, SingleConditionDirect) {
  // one edge later than two blockers among three clocks: 1/3
  OrderingEvent ev;
  ev.name = "single";
  ev.edges = {Segment{1, 0, false}, Segment{-1, 0, false}, Segment{3, 0, false}};
  ev.conditions = {LateCondition{0, {1, 2}}};
  expect_rational(ordering_probability(ev).value(), 1, 3);
  expect_rational(ordering_probability(ev, BlockerRule::any).value(), 2, 3);
}

TEST(PermOracle, Parsing) {
  EXPECT_EQ(parse_perm_case("case-I"), PermCase::case_one);
  EXPECT_EQ(to_string(PermCase::case_two), "case-II");
  EXPECT_THROW(parse_perm_case("case-III"), std::invalid_argument);
}

TEST(RedProb, ClosedFormMatchesOracle) {
  for (int d = 2; d <= 5; ++d) {
    const RedProb f = red_prob(d), o = red_prob_oracle(d);
    expect_rational(f.given_first, o.given_first.num(), o.given_first.den());
    expect_rational(f.given_second, o.given_second.num(), o.given_second.den());
    expect_rational(f.total.value(), o.total.num(), o.total.den());
  }
  EXPECT_THROW(red_prob_oracle(6), BudgetError);
}

TEST(RedProb, Values) {
  const RedProb three = red_prob(3);
  expect_rational(three.given_first, 19, 20);
  expect_rational(three.given_second, 4, 5);
  expect_rational(three.total.value(), 7, 8);
  for (int d = 2; d <= 60; ++d) EXPECT_GT(red_prob(d).total.to_double(), 0.5) << d;
  EXPECT_THROW(red_prob(1), std::invalid_argument);
}

TEST(Peierls, AtOne) {
  const PeierlsParams q = peierls_eval(1.0);
  EXPECT_EQ(q.eps, 0.0);
  EXPECT_NEAR(q.p, 0.394396335, 1e-9);
  EXPECT_NEAR(q.alpha, 0.699968112, 1e-9);
  EXPECT_NEAR(q.beta, 0.243501107, 1e-9);
  EXPECT_NEAR(q.delta, 0.983108717, 1e-9);
  EXPECT_TRUE(q.summable);
  EXPECT_EQ(q.tail_ratio, 0.0);
  EXPECT_LT(q.stirling_residual(), 1e-12);
}

TEST(Peierls, StirlingIdentityAcrossT) {
  for (double t : {0.9, 0.99, 0.999, 0.9999}) EXPECT_LT(peierls_eval(t).stirling_residual(), 1e-12) << t;
  // delta grows as t moves away from 1
  EXPECT_GT(peierls_eval(0.9).delta, peierls_eval(0.999).delta);
  EXPECT_FALSE(peierls_eval(0.5).summable);
  EXPECT_THROW(peierls_eval(0.0), std::invalid_argument);
  EXPECT_THROW(peierls_eval(1.5), std::invalid_argument);
}

TEST(Prop1, ScanAgreesWithClosedForm) {
  const double alpha = peierls_eval(1.0).alpha;
  const auto rows = prop1_sweep(200, alpha);
  for (const Prop1Result& r : rows) {
    EXPECT_TRUE(r.agree()) << r.k;
    EXPECT_FALSE(r.clamped) << r.k;
  }
  EXPECT_EQ(prop1_argmax(10, alpha).scan_argmax, 3);
}

TEST(Prop1, BruteForceSmallK) {
  // direct evaluation of alpha^s C(k-s-1, s-1)
  const double alpha = 0.7;
  for (int k = 2; k <= 30; ++k) {
    int best = 1;
    double best_v = -1.0;
    for (int s = 1; s <= k / 2; ++s) {
      double c = 1.0;
      for (int i = 0; i < s - 1; ++i) c = c * (k - s - 1 - i) / (i + 1);
      const double v = std::pow(alpha, s) * c;
      if (v > best_v * (1 + 1e-12)) best_v = v, best = s;
    }
    EXPECT_EQ(prop1_argmax(k, alpha).scan_argmax, best) << k;
  }
}
