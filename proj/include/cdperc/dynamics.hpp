#pragma once

// Harris-construction dynamics. One sweep over the edges in clock order fixes,
// for every edge, whether it opens (at its own clock) or stays closed forever;
// the configuration at any time t is then a filter of that single schedule.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdperc/errors.hpp"
#include "cdperc/lattice.hpp"
#include "cdperc/rng.hpp"

namespace cdperc {

/// One uniform clock per edge, pairwise distinct, in (0,1), plus the edge
/// order sorted by clock.
class ClockAssignment {
 public:
  /// Wrap explicit clock values. Values must lie in (0,1); ties are broken by
  /// nudging the later edge index up by one ulp.
  static ClockAssignment from_values(std::vector<double> values) {
    for (double v : values)
      if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("ClockAssignment: clock values must lie in (0,1)");
    ClockAssignment c;
    c.values_ = std::move(values);
    c.order_.resize(c.values_.size());
    std::iota(c.order_.begin(), c.order_.end(), EdgeId{0});
    std::stable_sort(c.order_.begin(), c.order_.end(),
                     [&](EdgeId a, EdgeId b) { return c.values_[a] < c.values_[b]; });
    for (std::size_t i = 1; i < c.order_.size(); ++i) {
      double& cur = c.values_[c.order_[i]];
      const double prev = c.values_[c.order_[i - 1]];
      if (cur <= prev) cur = std::nextafter(prev, 1.0);
      if (!(cur < 1.0)) throw InvariantError("ClockAssignment: tie-break pushed a clock to 1");
    }
    return c;
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](EdgeId e) const { return values_[e]; }
  std::span<const double> values() const noexcept { return values_; }
  /// Edge indices in increasing clock order.
  std::span<const EdgeId> order() const noexcept { return order_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t replica() const noexcept { return replica_; }

 private:
  friend ClockAssignment sample_clocks(const LatticeSpec&, std::uint64_t, std::uint64_t);

  std::vector<double> values_;
  std::vector<EdgeId> order_;
  std::uint64_t seed_ = 0;
  std::uint64_t replica_ = 0;
};

/// Clocks for every edge as a pure function of (seed, replica, edge index).
/// A collision on the 2^-53 grid (probability ~ E^2 / 2^54) moves the later
/// edge in (key, index) order one grid step up.
inline ClockAssignment sample_clocks(const LatticeSpec& lattice, std::uint64_t seed, std::uint64_t replica) {
  const std::size_t n = lattice.edge_count();
  const std::uint64_t stream = stream_key(seed, replica);
  std::vector<std::uint64_t> keys(n);
  for (std::size_t e = 0; e < n; ++e) keys[e] = clock_key(stream, e);

  ClockAssignment c;
  c.seed_ = seed;
  c.replica_ = replica;
  detail::sort_by_key(keys, c.order_);
  for (std::size_t i = 1; i < n; ++i) {
    std::uint64_t& cur = keys[c.order_[i]];
    const std::uint64_t prev = keys[c.order_[i - 1]];
    if (cur <= prev) {
      if (prev == kClockKeyMax) throw InvariantError("sample_clocks: clock grid exhausted");
      cur = prev + 1;
    }
  }
  c.values_.resize(n);
  for (std::size_t e = 0; e < n; ++e) c.values_[e] = clock_value(keys[e]);
  return c;
}

enum class Model { constrained, unrestricted, diminished };

inline const char* to_string(Model m) {
  switch (m) {
    case Model::constrained: return "constrained";
    case Model::unrestricted: return "unrestricted";
    case Model::diminished: return "diminished";
  }
  return "?";
}

/// Final verdict of the dynamics for every edge: OPEN at its clock, or BLOCKED.
struct OpeningSchedule {
  Model model = Model::constrained;
  std::vector<std::uint8_t> open;  // 1 = OPEN, 0 = BLOCKED
  std::vector<double> clock;       // U_e for every edge
  std::vector<EdgeId> order;       // edges sorted by clock

  std::size_t size() const noexcept { return open.size(); }
  bool is_open(EdgeId e) const { return open[e] != 0; }
  std::optional<double> opening_time(EdgeId e) const {
    if (!open[e]) return std::nullopt;
    return clock[e];
  }
  std::size_t blocked_count() const {
    return static_cast<std::size_t>(std::count(open.begin(), open.end(), std::uint8_t{0}));
  }
};

namespace detail {
inline OpeningSchedule schedule_shell(Model model, const ClockAssignment& clocks) {
  OpeningSchedule s;
  s.model = model;
  s.clock.assign(clocks.values().begin(), clocks.values().end());
  s.order.assign(clocks.order().begin(), clocks.order().end());
  s.open.assign(clocks.size(), 0);
  return s;
}
inline void require_cover(const LatticeSpec& lattice, const ClockAssignment& clocks) {
  if (clocks.size() != lattice.edge_count()) throw std::invalid_argument("clocks do not cover the lattice edges");
}
}  // namespace detail

/// Constrained-degree dynamics: in clock order, edge <u,v> opens iff both
/// endpoints currently have open degree below their cap.
inline OpeningSchedule run_constrained(const LatticeSpec& lattice, const ClockAssignment& clocks,
                                       const ConstraintSpec& constraint) {
  detail::require_cover(lattice, clocks);
  if (constraint.size() != lattice.vertex_count()) throw std::invalid_argument("constraint does not cover the lattice");
  OpeningSchedule s = detail::schedule_shell(Model::constrained, clocks);
  std::vector<std::uint32_t> deg(lattice.vertex_count(), 0);
  for (EdgeId e : s.order) {
    const Edge ed = lattice.endpoints(e);
    if (deg[ed.u] < constraint.cap(ed.u) && deg[ed.v] < constraint.cap(ed.v)) {
      s.open[e] = 1;
      ++deg[ed.u];
      ++deg[ed.v];
    }
  }
  return s;
}

inline OpeningSchedule run_unrestricted(const LatticeSpec& lattice, const ClockAssignment& clocks) {
  detail::require_cover(lattice, clocks);
  OpeningSchedule s = detail::schedule_shell(Model::unrestricted, clocks);
  std::fill(s.open.begin(), s.open.end(), std::uint8_t{1});
  return s;
}

// --- diminished model --------------------------------------------------------

/// One 4x3 tile (4m, 3n) + {0..3} x {0..2} with its centre edge g, the six
/// edges with exactly one endpoint on the tile boundary (A) and the ten with
/// both endpoints on it (B).
struct Tile {
  int m = 0;
  int n = 0;
  EdgeId g = 0;
  std::array<EdgeId, 6> a{};
  std::array<EdgeId, 10> b{};
};

struct DiminishmentLayout {
  std::vector<Tile> tiles;
};

/// Tiles fully contained in a free planar box; partial tiles are skipped.
inline DiminishmentLayout diminishment_layout(const LatticeSpec& lattice) {
  if (!lattice.is_planar_free_box()) throw LatticeError("diminishment_layout: requires a free box with d = 2");
  auto floor_div = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  auto ceil_div = [&](int a, int b) { return -floor_div(-a, b); };
  const auto lo = lattice.lower();
  const auto hi = lattice.upper();

  DiminishmentLayout layout;
  for (int m = ceil_div(lo[0], 4); 4 * m + 3 <= hi[0]; ++m) {
    for (int n = ceil_div(lo[1], 3); 3 * n + 2 <= hi[1]; ++n) {
      Tile tile;
      tile.m = m;
      tile.n = n;
      const int ox = 4 * m, oy = 3 * n;
      auto at = [&](int x, int y) {
        const int c[2] = {ox + x, oy + y};
        return *lattice.vertex_at(c);
      };
      auto on_boundary = [](int x, int y) { return x == 0 || x == 3 || y == 0 || y == 2; };
      std::size_t na = 0, nb = 0;
      bool have_g = false;
      for (int x = 0; x <= 3; ++x) {
        for (int y = 0; y <= 2; ++y) {
          for (int axis = 0; axis < 2; ++axis) {
            const int x2 = x + (axis == 0), y2 = y + (axis == 1);
            if (x2 > 3 || y2 > 2) continue;
            const EdgeId e = *lattice.edge_between(at(x, y), at(x2, y2));
            const int hits = on_boundary(x, y) + on_boundary(x2, y2);
            if (hits == 0) {
              if (x != 1 || y != 1 || axis != 0) throw InvariantError("diminishment_layout: unexpected interior edge");
              tile.g = e;
              have_g = true;
            } else if (hits == 1) {
              tile.a.at(na++) = e;
            } else {
              tile.b.at(nb++) = e;
            }
          }
        }
      }
      if (!have_g || na != 6 || nb != 10) throw InvariantError("diminishment_layout: tile partition broken");
      layout.tiles.push_back(tile);
    }
  }
  return layout;
}

/// Whether the blocking event for a tile holds: every A clock precedes every
/// clock in B and the centre edge.
inline bool tile_blocks(const Tile& tile, std::span<const double> clock) {
  double max_a = 0.0;
  for (EdgeId e : tile.a) max_a = std::max(max_a, clock[e]);
  double min_rest = clock[tile.g];
  for (EdgeId e : tile.b) min_rest = std::min(min_rest, clock[e]);
  return max_a < min_rest;
}

/// Unrestricted dynamics except that each tile centre g stays closed when its
/// tile's blocking event holds.
inline OpeningSchedule run_diminished(const LatticeSpec& lattice, const ClockAssignment& clocks) {
  detail::require_cover(lattice, clocks);
  const DiminishmentLayout layout = diminishment_layout(lattice);
  if (layout.tiles.empty()) throw LatticeError("run_diminished: box too small to contain a full tile (need L >= 4)");
  OpeningSchedule s = detail::schedule_shell(Model::diminished, clocks);
  std::fill(s.open.begin(), s.open.end(), std::uint8_t{1});
  for (const Tile& tile : layout.tiles)
    if (tile_blocks(tile, s.clock)) s.open[tile.g] = 0;
  return s;
}

// --- configurations -------------------------------------------------------------

/// Open edges at a fixed time t: omega_t = {e : OPEN and U_e <= t}.
struct Configuration {
  double t = 0.0;
  std::vector<std::uint8_t> open;

  bool is_open(EdgeId e) const { return open[e] != 0; }
  std::size_t open_count() const {
    return static_cast<std::size_t>(std::count(open.begin(), open.end(), std::uint8_t{1}));
  }
};

inline Configuration config_at(const OpeningSchedule& schedule, double t) {
  Configuration c;
  c.t = t;
  c.open.resize(schedule.size());
  for (std::size_t e = 0; e < schedule.size(); ++e)
    c.open[e] = static_cast<std::uint8_t>(schedule.open[e] && schedule.clock[e] <= t);
  return c;
}

/// Configuration with every edge in a given state; handy for tests and
/// hand-built scenarios.
inline Configuration uniform_configuration(const LatticeSpec& lattice, bool open) {
  Configuration c;
  c.t = open ? 1.0 : 0.0;
  c.open.assign(lattice.edge_count(), static_cast<std::uint8_t>(open));
  return c;
}

/// Recompute every verdict from scratch using only the incident edges whose
/// clocks are strictly smaller, and compare with the sweep. Returns the first
/// edge whose verdict disagrees, if any.
inline std::optional<EdgeId> replay_mismatch(const LatticeSpec& lattice, const ConstraintSpec& constraint,
                                             const OpeningSchedule& schedule) {
  auto earlier_open = [&](VertexId v, EdgeId e) {
    std::uint32_t n = 0;
    for (EdgeId f : lattice.incident(v))
      if (f != e && schedule.open[f] && schedule.clock[f] < schedule.clock[e]) ++n;
    return n;
  };
  for (EdgeId e = 0; e < schedule.size(); ++e) {
    const Edge ed = lattice.endpoints(e);
    const bool expect = earlier_open(ed.u, e) < constraint.cap(ed.u) && earlier_open(ed.v, e) < constraint.cap(ed.v);
    if (expect != schedule.is_open(e)) return e;
  }
  return std::nullopt;
}

/// Largest open degree any vertex reaches in the schedule.
inline std::uint32_t max_final_degree_excess(const LatticeSpec& lattice, const ConstraintSpec& constraint,
                                             const OpeningSchedule& schedule) {
  std::vector<std::uint32_t> deg(lattice.vertex_count(), 0);
  std::uint32_t worst = 0;
  for (EdgeId e : schedule.order) {
    if (!schedule.open[e]) continue;
    const Edge ed = lattice.endpoints(e);
    for (VertexId v : {ed.u, ed.v}) {
      ++deg[v];
      if (deg[v] > constraint.cap(v)) worst = std::max(worst, deg[v] - constraint.cap(v));
    }
  }
  return worst;
}

/// Blocked edges whose endpoints both finish below their caps. The cap that
/// blocked an edge stays saturated forever, so this must always be empty.
inline std::size_t unsaturated_blocked(const LatticeSpec& lattice, const ConstraintSpec& constraint,
                                       const OpeningSchedule& schedule) {
  std::vector<std::uint32_t> deg(lattice.vertex_count(), 0);
  for (EdgeId e = 0; e < schedule.size(); ++e) {
    if (!schedule.open[e]) continue;
    const Edge ed = lattice.endpoints(e);
    ++deg[ed.u];
    ++deg[ed.v];
  }
  std::size_t bad = 0;
  for (EdgeId e = 0; e < schedule.size(); ++e) {
    if (schedule.open[e]) continue;
    const Edge ed = lattice.endpoints(e);
    bad += deg[ed.u] < constraint.cap(ed.u) && deg[ed.v] < constraint.cap(ed.v);
  }
  return bad;
}

/// Edges breaking lower <= upper at some event time. Every model opens an
/// edge exactly at its own clock, so comparing each edge at its own event
/// covers every later time as well.
inline std::size_t sandwich_violations(const OpeningSchedule& lower, const OpeningSchedule& upper) {
  if (lower.size() != upper.size() || lower.clock != upper.clock)
    throw std::invalid_argument("sandwich_violations: schedules do not share clocks");
  std::size_t bad = 0;
  for (EdgeId e : lower.order) bad += lower.open[e] > upper.open[e];
  return bad;
}

}  // namespace cdperc
