#include <gtest/gtest.h>

#include "cdperc/estimators.hpp"

using namespace cdperc;

namespace {

ExperimentConfig config(ExperimentKind kind, std::uint64_t seed) {
  ExperimentConfig c;
  c.kind = kind;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Stats, WilsonBasics) {
  const Interval a = wilson_interval(50, 100);
  EXPECT_LT(a.lo, 0.5);
  EXPECT_GT(a.hi, 0.5);
  EXPECT_NEAR(a.lo, 0.4038, 1e-4);
  const Interval z = wilson_interval(0, 100);
  EXPECT_EQ(z.lo, 0.0);
  EXPECT_GT(z.hi, 0.0);
  EXPECT_NEAR(z_for_confidence(0.9), 1.6448536, 1e-6);
}

TEST(Stats, WilsonCoverage) {
  // synthetic Bernoulli trials with known p
  StreamRng rng(mix64(2024));
  int covered = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const double p = 0.1 + 0.8 * rng.next_uniform();
    std::size_t s = 0;
    for (int j = 0; j < 200; ++j) s += rng.next_uniform() < p;
    covered += wilson_interval(s, 200).contains(p);
  }
  EXPECT_GE(covered, 900);
}

TEST(Stats, RatioEstimator) {
  std::vector<double> num{3, 4, 5, 4}, den{4, 5, 6, 5};
  const MeanEstimate m = ratio_with_ci(num, den);
  EXPECT_DOUBLE_EQ(m.mean, 16.0 / 20.0);
  EXPECT_GT(m.half_width, 0.0);
}

TEST(Theta, UnrestrictedAtOne) {
  auto c = config(ExperimentKind::theta, 1);
  c.model = Model::unrestricted;
  c.replicas = 20;
  c.times = {0.0, 1.0};
  const auto e = estimate_theta(c, 8);
  EXPECT_EQ(e.points[0].estimate(), 0.0);
  EXPECT_EQ(e.points[1].estimate(), 1.0);
}

TEST(Theta, ExactlyMonotone) {
  auto c = config(ExperimentKind::theta, 2);
  c.replicas = 100;
  for (int i = 0; i <= 20; ++i) c.times.push_back(i / 20.0);
  std::sort(c.times.begin(), c.times.end());
  const auto e = estimate_theta(c, 10);
  for (std::size_t i = 1; i < e.points.size(); ++i) EXPECT_LE(e.points[i - 1].successes, e.points[i].successes);
}

TEST(Theta, DecreasesWithSizeAtHalf) {
  auto c = config(ExperimentKind::theta, 3);
  c.replicas = 400;
  c.times = {0.5};
  const double small = estimate_theta(c, 8).points[0].estimate();
  const double large = estimate_theta(c, 32).points[0].estimate();
  EXPECT_GT(small, large);
}

TEST(Theta, ThreadCountIrrelevant) {
  auto c = config(ExperimentKind::theta, 4);
  c.replicas = 40;
  c.times = {0.55, 0.7};
  const auto a = estimate_theta(c, 10);
  c.threads = 3;
  const auto b = estimate_theta(c, 10);
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].successes, b.points[i].successes);
}

TEST(Crossing, UnrestrictedSelfDualHalf) {
  auto c = config(ExperimentKind::crossing, 5);
  c.model = Model::unrestricted;
  c.replicas = 1000;
  c.times = {0.5};
  const auto p = estimate_crossing(c, 24).points[0];
  EXPECT_TRUE(wilson_interval(p.successes, p.trials, kZ99).contains(0.5));
}

TEST(Crossing, ConstrainedBelowHalfAndSaturates) {
  auto c = config(ExperimentKind::crossing, 6);
  c.replicas = 300;
  c.times = {0.5, 1.0};
  const auto a = estimate_crossing(c, 16), b = estimate_crossing(c, 48);
  EXPECT_LT(a.points[0].estimate(), 0.5);
  EXPECT_GT(a.points[0].estimate(), b.points[0].estimate());
  EXPECT_GE(b.points[1].estimate(), a.points[1].estimate());
  EXPECT_GT(b.points[1].estimate(), 0.9);
}

TEST(Tc, UnrestrictedBracketsHalf) {
  auto c = config(ExperimentKind::tc, 7);
  c.model = Model::unrestricted;
  c.confidence = 0.99;
  c.tc_max_batches = 4;
  const auto e = estimate_tc(c, 32);
  EXPECT_LT(e.t_lo, e.t_hi);
  EXPECT_LE(e.t_lo, 0.5);
  EXPECT_GE(e.t_hi, 0.5);
}

TEST(Tc, ConstrainedAboveHalfBelowOne) {
  auto c = config(ExperimentKind::tc, 8);
  c.confidence = 0.99;
  c.tc_max_batches = 4;
  const auto e = estimate_tc(c, 64);
  EXPECT_GT(e.t_lo, 0.5);
  EXPECT_LT(e.t_hi, 1.0);
}

TEST(Tc, BudgetFlag) {
  auto c = config(ExperimentKind::tc, 9);
  c.model = Model::unrestricted;
  c.tc_batch = 50;
  c.tc_max_batches = 1;
  c.tc_tolerance = 1e-4;
  const auto e = estimate_tc(c, 16);
  EXPECT_FALSE(e.conclusive);
  EXPECT_LT(e.t_lo, e.t_hi);
  EXPECT_EQ(e.replicas, 50u);
}

TEST(K2, PathMatchesUnrestricted) {
  // degree never exceeds 2 on a path, so the cap never binds
  const auto s = build_box_lattice(1, 30, Boundary::free);
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto c = sample_clocks(s, 12, r);
    EXPECT_EQ(run_constrained(s, c, ConstraintSpec::uniform(s, 2)).open, run_unrestricted(s, c).open);
  }
}

TEST(K2, DecaysAwayFromOrigin) {
  auto c = config(ExperimentKind::k2, 10);
  c.k = 2;
  c.replicas = 300;
  c.norm = Norm::l1;
  const auto r = k2_decay_experiment(c, 24, 1.0);
  EXPECT_EQ(r.x[0].mean, 1.0);
  EXPECT_LT(r.x.back().mean, r.x[3].mean);
  EXPECT_LE(r.reach.estimate(), 0.05);
  for (std::size_t n = 4; n < r.increment.size(); ++n) EXPECT_LE(r.increment[n].mean - r.increment[n].half_width, 0.0);
}

TEST(Uniqueness, Examples) {
  auto c = config(ExperimentKind::uniqueness, 11);
  c.replicas = 100;
  const auto zero = uniqueness_experiment(c, 16, 0.0);
  EXPECT_EQ(zero.counts.size(), 1u);
  EXPECT_EQ(zero.counts.at(0), 100u);
  c.model = Model::unrestricted;
  const auto high = uniqueness_experiment(c, 32, 0.9);
  EXPECT_GE(high.counts.count(1) ? high.counts.at(1) : 0, 95u);
}

TEST(Tree, BinaryMatchesUnrestricted) {
  const auto s = build_tree(2, 8);
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto c = sample_clocks(s, 13, r);
    EXPECT_EQ(run_constrained(s, c, ConstraintSpec::uniform(s, 3)).open, run_unrestricted(s, c).open);
  }
}

TEST(Tree, SurvivalExamples) {
  auto c = config(ExperimentKind::tree, 14);
  c.arity = 3;
  c.depth = 7;
  c.replicas = 50;
  EXPECT_EQ(tree_survival(c, 0.0).survival.successes, 0u);
  const auto r = tree_survival(c, 1.0);
  EXPECT_GT(r.survival.estimate(), 0.2);
  EXPECT_EQ(r.red_closed, 0u);
}

TEST(Simulate, SummaryInvariants) {
  auto c = config(ExperimentKind::simulate, 15);
  c.replicas = 3;
  c.times = {0.5, 1.0};
  for (const auto& row : simulate(c, 10)) {
    EXPECT_TRUE(row.replay_ok);
    EXPECT_EQ(row.degree_excess, 0u);
    EXPECT_EQ(row.unsaturated_blocked, 0u);
    EXPECT_EQ(row.open_at.back(), row.open);
    EXPECT_LE(row.open_at.front(), row.open_at.back());
  }
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.replicas = 0;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "replicas");
  }
  c = ExperimentConfig{};
  c.times = {1.5};
  EXPECT_THROW(c.validate(), ConfigError);
}
