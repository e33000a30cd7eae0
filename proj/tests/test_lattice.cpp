#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "cdperc/lattice.hpp"

using namespace cdperc;

namespace {

void expect_handshake(const LatticeSpec& s) {
  std::size_t total = 0;
  for (VertexId v = 0; v < s.vertex_count(); ++v) total += s.degree(v);
  EXPECT_EQ(total, 2 * s.edge_count());
  for (EdgeId e = 0; e < s.edge_count(); ++e) {
    const Edge ed = s.endpoints(e);
    EXPECT_EQ(s.other(e, ed.u), ed.v);
    EXPECT_EQ(s.other(e, ed.v), ed.u);
    EXPECT_EQ(s.edge_between(ed.u, ed.v), e);
    EXPECT_EQ(s.edge_between(ed.v, ed.u), e);
  }
}

}  // namespace

TEST(Box, SmallCounts) {
  const auto a = build_box_lattice(2, 1, Boundary::free);
  EXPECT_EQ(a.vertex_count(), 9u);
  EXPECT_EQ(a.edge_count(), 12u);
  const auto b = build_box_lattice(1, 2, Boundary::free);
  EXPECT_EQ(b.vertex_count(), 5u);
  EXPECT_EQ(b.edge_count(), 4u);
  const auto c = build_box_lattice(2, 3, Boundary::periodic);
  EXPECT_EQ(c.vertex_count(), 9u);
  EXPECT_EQ(c.edge_count(), 18u);
  for (VertexId v = 0; v < c.vertex_count(); ++v) EXPECT_EQ(c.degree(v), 4u);
}

TEST(Box, FreeInvariants) {
  for (int d = 1; d <= 3; ++d) {
    for (int L = 1; L <= 3; ++L) {
      const auto s = build_box_lattice(d, L, Boundary::free);
      std::size_t expect = 1;
      for (int i = 0; i < d; ++i) expect *= static_cast<std::size_t>(2 * L + 1);
      EXPECT_EQ(s.vertex_count(), expect);
      expect_handshake(s);
      for (EdgeId e = 0; e < s.edge_count(); ++e) {
        const auto cu = s.coordinates(s.endpoints(e).u), cv = s.coordinates(s.endpoints(e).v);
        int dist = 0;
        for (int i = 0; i < d; ++i) dist += std::abs(cu[i] - cv[i]);
        EXPECT_EQ(dist, 1);
      }
      ASSERT_TRUE(s.origin().has_value());
      for (int i = 0; i < d; ++i) EXPECT_EQ(s.coordinate(*s.origin(), i), 0);
    }
  }
}

TEST(Box, PeriodicDegree) {
  const auto s = build_box_lattice(3, 4, Boundary::periodic);
  EXPECT_EQ(s.vertex_count(), 64u);
  for (VertexId v = 0; v < s.vertex_count(); ++v) EXPECT_EQ(s.degree(v), 6u);
  expect_handshake(s);
}

TEST(Box, Preconditions) {
  EXPECT_THROW(build_box_lattice(0, 2, Boundary::free), LatticeError);
  EXPECT_THROW(build_box_lattice(2, 0, Boundary::free), LatticeError);
  EXPECT_THROW(build_box_lattice(2, 2, Boundary::periodic), LatticeError);
}

TEST(Box, LexicographicIndexing) {
  const auto s = build_box_lattice(2, 1, Boundary::free);
  VertexId prev = 0;
  for (int x = -1; x <= 1; ++x) {
    for (int y = -1; y <= 1; ++y) {
      const int c[2] = {x, y};
      const VertexId v = *s.vertex_at(c);
      if (x != -1 || y != -1) {
        EXPECT_GT(v, prev);
      }
      prev = v;
    }
  }
  // edges are listed by lower endpoint, then axis
  for (EdgeId e = 1; e < s.edge_count(); ++e) {
    const Edge a = s.endpoints(e - 1), b = s.endpoints(e);
    EXPECT_TRUE(a.u < b.u || (a.u == b.u && s.axis(e - 1) < s.axis(e)));
  }
}

TEST(Box, Shells) {
  const auto s = build_box_lattice(2, 3, Boundary::free);
  EXPECT_EQ(s.shell(0, Norm::linf).size(), 1u);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(s.shell(n, Norm::linf).size(), static_cast<std::size_t>(8 * n));
    EXPECT_EQ(s.shell(n, Norm::l1).size(), static_cast<std::size_t>(4 * n));
  }
}

TEST(Box, SizingError) {
  EXPECT_THROW(build_box_lattice(12, 50, Boundary::free), SizingError);
}

TEST(Tree, Counts) {
  const auto a = build_tree(2, 2);
  EXPECT_EQ(a.vertex_count(), 7u);
  EXPECT_EQ(a.edge_count(), 6u);
  const auto b = build_tree(3, 1);
  EXPECT_EQ(b.vertex_count(), 4u);
  EXPECT_EQ(b.edge_count(), 3u);
  const auto c = build_tree(2, 10);
  EXPECT_EQ(c.vertex_count(), 2047u);
  EXPECT_EQ(c.edge_count(), 2046u);
}

TEST(Tree, Structure) {
  const auto s = build_tree(3, 4);
  expect_handshake(s);
  EXPECT_EQ(s.degree(0), 3u);
  for (VertexId v = 1; v < s.vertex_count(); ++v) {
    EXPECT_EQ(s.degree(v), s.is_leaf(v) ? 1u : 4u);
    EXPECT_EQ(s.generation(v), s.generation(s.parent(v)) + 1);
    EXPECT_EQ(s.endpoints(LatticeSpec::edge_to_child(v)).v, v);
  }
  // children in index order
  const VertexId first = s.first_child(2);
  for (int a = 0; a < 3; ++a) EXPECT_EQ(s.parent(first + static_cast<VertexId>(a)), 2u);
  EXPECT_EQ(s.level_begin(4), 40u);
  EXPECT_THROW(build_tree(1, 3), LatticeError);
  EXPECT_THROW(build_tree(2, 0), LatticeError);
}

TEST(Constraint, Caps) {
  const auto s = build_box_lattice(2, 1, Boundary::free);
  const auto c = ConstraintSpec::uniform(s, 7);  // above every degree: inert, still legal
  EXPECT_EQ(c.cap(0), 7u);
  EXPECT_THROW(ConstraintSpec::uniform(s, 0), LatticeError);
  EXPECT_THROW(ConstraintSpec::per_vertex({1, 0}), LatticeError);
}

TEST(Dual, ExampleEdge) {
  const auto s = build_box_lattice(2, 2, Boundary::free);
  const auto map = dual_map(s);
  const int o[2] = {0, 0}, r[2] = {1, 0};
  const EdgeId e = *s.edge_between(*s.vertex_at(o), *s.vertex_at(r));
  const DualEdge d = map.dual(e);
  EXPECT_EQ(d.a, (HalfPoint{1, -1}));  // (1/2, -1/2)
  EXPECT_EQ(d.b, (HalfPoint{1, 1}));   // (1/2, 1/2)
}

TEST(Dual, Bijection) {
  for (int L = 1; L <= 4; ++L) {
    const auto s = build_box_lattice(2, L, Boundary::free);
    const auto map = dual_map(s);
    EXPECT_EQ(map.size(), s.edge_count());
    std::set<DualEdge> seen;
    for (EdgeId e = 0; e < s.edge_count(); ++e) {
      const DualEdge d = map.dual(e);
      EXPECT_TRUE(seen.insert(d).second);
      EXPECT_EQ(map.primal(d), e);
      // the dual segment crosses its primal edge at the shared midpoint
      const Edge ed = s.endpoints(e);
      const int mx = s.coordinate(ed.u, 0) + s.coordinate(ed.v, 0);
      const int my = s.coordinate(ed.u, 1) + s.coordinate(ed.v, 1);
      EXPECT_EQ(d.a.twice_x + d.b.twice_x, 2 * mx);
      EXPECT_EQ(d.a.twice_y + d.b.twice_y, 2 * my);
    }
  }
}

TEST(Dual, WrongKind) {
  EXPECT_THROW(dual_map(build_tree(2, 3)), LatticeError);
  EXPECT_THROW(dual_map(build_box_lattice(3, 1, Boundary::free)), LatticeError);
  EXPECT_THROW(dual_map(build_box_lattice(2, 3, Boundary::periodic)), LatticeError);
}
