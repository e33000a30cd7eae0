#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "cdperc/dynamics.hpp"

using namespace cdperc;

namespace {

ClockAssignment by_values(std::vector<double> v) { return ClockAssignment::from_values(std::move(v)); }

}  // namespace

TEST(Clocks, Deterministic) {
  const auto s = build_box_lattice(2, 8, Boundary::free);
  const auto a = sample_clocks(s, 42, 0), b = sample_clocks(s, 42, 0), c = sample_clocks(s, 42, 1);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
  EXPECT_EQ(a.seed(), 42u);
  EXPECT_EQ(c.replica(), 1u);
}

TEST(Clocks, DistinctSortedInRange) {
  const auto s = build_box_lattice(2, 40, Boundary::free);
  const auto c = sample_clocks(s, 7, 3);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_GT(c.values()[i], 0.0);
    EXPECT_LT(c.values()[i], 1.0);
  }
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[c.order()[i - 1]], c[c.order()[i]]);
}

TEST(Clocks, MeanNearHalf) {
  const auto s = build_box_lattice(2, 120, Boundary::free);  // 57840 edges
  double sum = 0.0;
  std::size_t n = 0;
  for (std::uint64_t r = 0; r < 2; ++r) {
    const auto c = sample_clocks(s, 11, r);
    for (double v : c.values()) sum += v;
    n += c.size();
  }
  ASSERT_GE(n, 100000u);
  EXPECT_NEAR(sum / static_cast<double>(n), 0.5, 0.01);
}

TEST(Clocks, TieBreak) {
  const auto c = by_values({0.5, 0.5, 0.25});
  EXPECT_LT(c[0], c[1]);
  EXPECT_EQ(c.order()[0], 2u);
  EXPECT_THROW(by_values({0.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(by_values({1.0}), std::invalid_argument);
}

TEST(Constrained, PathCapOne) {
  const auto s = build_box_lattice(1, 1, Boundary::free);  // u - v - w
  ASSERT_EQ(s.edge_count(), 2u);
  const auto sch = run_constrained(s, by_values({0.2, 0.7}), ConstraintSpec::uniform(s, 1));
  EXPECT_TRUE(sch.is_open(0));
  EXPECT_EQ(sch.opening_time(0), 0.2);
  EXPECT_FALSE(sch.is_open(1));
  EXPECT_FALSE(sch.opening_time(1).has_value());
}

TEST(Constrained, SquareNeverBinds) {
  const auto s = build_rectangle(2, 2);
  ASSERT_EQ(s.edge_count(), 4u);
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto sch = run_constrained(s, sample_clocks(s, 5, r), ConstraintSpec::uniform(s, 3));
    EXPECT_EQ(sch.blocked_count(), 0u);
  }
}

TEST(Constrained, StarCentreCapThree) {
  const auto s = build_tree(4, 1);  // centre 0, four leaves
  std::vector<std::uint32_t> caps{3, 4, 4, 4, 4};
  std::vector<int> perm{0, 1, 2, 3};
  do {
    std::vector<double> v(4);
    for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(i)] = 0.1 + 0.2 * perm[static_cast<std::size_t>(i)];
    const auto sch = run_constrained(s, by_values(v), ConstraintSpec::per_vertex(caps));
    for (EdgeId e = 0; e < 4; ++e) EXPECT_EQ(sch.is_open(e), perm[e] != 3);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Constrained, ScheduleInvariants) {
  for (int k : {1, 2, 3}) {
    const auto s = build_box_lattice(2, 12, Boundary::free);
    const auto caps = ConstraintSpec::uniform(s, k);
    for (std::uint64_t r = 0; r < 5; ++r) {
      const auto c = sample_clocks(s, 100 + k, r);
      const auto sch = run_constrained(s, c, caps);
      EXPECT_EQ(max_final_degree_excess(s, caps, sch), 0u);
      EXPECT_FALSE(replay_mismatch(s, caps, sch).has_value());
      EXPECT_EQ(unsaturated_blocked(s, caps, sch), 0u);
    }
  }
}

TEST(Constrained, PrefixDegreeCap) {
  const auto s = build_box_lattice(2, 6, Boundary::periodic);
  const auto caps = ConstraintSpec::uniform(s, 3);
  const auto sch = run_constrained(s, sample_clocks(s, 9, 0), caps);
  std::vector<std::uint32_t> deg(s.vertex_count(), 0);
  for (EdgeId e : sch.order) {
    if (!sch.is_open(e)) continue;
    const Edge ed = s.endpoints(e);
    EXPECT_LE(++deg[ed.u], 3u);
    EXPECT_LE(++deg[ed.v], 3u);
  }
}

TEST(Constrained, OnlyOrderMatters) {
  const auto s = build_box_lattice(2, 10, Boundary::free);
  const auto caps = ConstraintSpec::uniform(s, 3);
  const auto c = sample_clocks(s, 21, 0);
  std::vector<double> ranks(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    ranks[c.order()[i]] = (static_cast<double>(i) + 1.0) / (static_cast<double>(c.size()) + 1.0);
  const auto a = run_constrained(s, c, caps), b = run_constrained(s, by_values(ranks), caps);
  EXPECT_EQ(a.open, b.open);
}

TEST(Constrained, SaturationAtOneForKThree) {
  const auto s = build_box_lattice(2, 20, Boundary::free);
  const auto caps = ConstraintSpec::uniform(s, 3);
  const auto sch = run_constrained(s, sample_clocks(s, 3, 0), caps);
  std::vector<std::uint32_t> deg(s.vertex_count(), 0);
  for (EdgeId e = 0; e < s.edge_count(); ++e)
    if (sch.is_open(e)) ++deg[s.endpoints(e).u], ++deg[s.endpoints(e).v];
  for (EdgeId e = 0; e < s.edge_count(); ++e) {
    if (sch.is_open(e)) continue;
    const Edge ed = s.endpoints(e);
    EXPECT_FALSE(deg[ed.u] <= 2 && deg[ed.v] <= 2);
  }
}

TEST(Unrestricted, AllOpen) {
  const auto s = build_box_lattice(2, 6, Boundary::free);
  const auto c = sample_clocks(s, 1, 0);
  const auto u = run_unrestricted(s, c);
  EXPECT_EQ(u.blocked_count(), 0u);
  EXPECT_EQ(config_at(u, 1.0).open_count(), s.edge_count());
  const auto k = run_constrained(s, c, ConstraintSpec::uniform(s, 2));
  EXPECT_EQ(sandwich_violations(k, u), 0u);
}

TEST(Diminished, Layout) {
  const auto s = build_box_lattice(2, 8, Boundary::free);
  const auto layout = diminishment_layout(s);
  ASSERT_FALSE(layout.tiles.empty());
  for (const Tile& t : layout.tiles) {
    std::set<EdgeId> all(t.a.begin(), t.a.end());
    all.insert(t.b.begin(), t.b.end());
    all.insert(t.g);
    EXPECT_EQ(all.size(), 17u);  // 4x3 box has 17 edges, three disjoint parts
    const Edge g = s.endpoints(t.g);
    EXPECT_EQ(s.coordinate(g.u, 0), 4 * t.m + 1);
    EXPECT_EQ(s.coordinate(g.u, 1), 3 * t.n + 1);
    EXPECT_EQ(s.coordinate(g.v, 0), 4 * t.m + 2);
  }
  // every tile lies fully inside [-8, 8]^2
  for (const Tile& t : layout.tiles) {
    EXPECT_GE(4 * t.m, -8);
    EXPECT_LE(4 * t.m + 3, 8);
    EXPECT_GE(3 * t.n, -8);
    EXPECT_LE(3 * t.n + 2, 8);
  }
  EXPECT_THROW(run_diminished(build_box_lattice(2, 1, Boundary::free), sample_clocks(build_box_lattice(2, 1, Boundary::free), 1, 0)),
               LatticeError);
}

TEST(Diminished, BlockingEvent) {
  const auto s = build_box_lattice(2, 4, Boundary::free);
  const auto layout = diminishment_layout(s);
  ASSERT_FALSE(layout.tiles.empty());
  const Tile& t = layout.tiles.front();
  // A all early, B and g late: g blocked
  std::vector<double> v(s.edge_count(), 0.5);
  double next = 0.01;
  for (EdgeId e : t.a) v[e] = next += 0.01;
  next = 0.6;
  for (EdgeId e : t.b) v[e] = next += 0.01;
  v[t.g] = 0.99;
  auto sch = run_diminished(s, by_values(v));
  EXPECT_FALSE(sch.is_open(t.g));
  // one A clock after some B clock: g opens
  v[t.a[0]] = 0.995;
  sch = run_diminished(s, by_values(v));
  EXPECT_TRUE(sch.is_open(t.g));
}

TEST(Diminished, Sandwich) {
  const auto s = build_box_lattice(2, 16, Boundary::free);
  const auto caps = ConstraintSpec::uniform(s, 3);
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto c = sample_clocks(s, 77, r);
    const auto low = run_constrained(s, c, caps), mid = run_diminished(s, c), high = run_unrestricted(s, c);
    EXPECT_EQ(sandwich_violations(low, mid), 0u);
    EXPECT_EQ(sandwich_violations(mid, high), 0u);
    for (double t : {0.3, 0.6, 0.9, 1.0}) {
      const auto a = config_at(low, t), b = config_at(mid, t), d = config_at(high, t);
      for (EdgeId e = 0; e < s.edge_count(); ++e) {
        EXPECT_LE(a.open[e], b.open[e]);
        EXPECT_LE(b.open[e], d.open[e]);
      }
    }
  }
}

TEST(Config, Filters) {
  const auto s = build_box_lattice(2, 5, Boundary::free);
  const auto sch = run_constrained(s, sample_clocks(s, 2, 0), ConstraintSpec::uniform(s, 3));
  EXPECT_EQ(config_at(sch, 0.0).open_count(), 0u);
  const auto u = run_unrestricted(s, sample_clocks(s, 2, 0));
  EXPECT_EQ(config_at(u, 1.0).open_count(), s.edge_count());
  Configuration prev = config_at(sch, 0.0);
  for (double t = 0.05; t <= 1.0001; t += 0.05) {
    const Configuration cur = config_at(sch, t);
    for (EdgeId e = 0; e < s.edge_count(); ++e) EXPECT_LE(prev.open[e], cur.open[e]);
    prev = cur;
  }
}
