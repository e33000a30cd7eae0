#pragma once

// Connectivity over configurations and schedules. Edges only ever open, so a
// plain incremental union-find swept in clock order answers "when do these
// vertices first connect" for every t at once.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "cdperc/dynamics.hpp"
#include "cdperc/lattice.hpp"

namespace cdperc {

/// Union-find with union by size and path halving.
class ClusterForest {
 public:
  explicit ClusterForest(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::uint32_t find(std::uint32_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  /// Returns true when two distinct components were merged.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }

  bool connected(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }
  std::uint32_t component_size(std::uint32_t x) { return size_[find(x)]; }
  std::size_t component_count() const noexcept { return components_; }
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t components_;
};

inline ClusterForest components(const Configuration& config, const LatticeSpec& lattice) {
  ClusterForest forest(lattice.vertex_count());
  for (EdgeId e = 0; e < lattice.edge_count(); ++e) {
    if (!config.is_open(e)) continue;
    const Edge ed = lattice.endpoints(e);
    forest.unite(ed.u, ed.v);
  }
  return forest;
}

/// First time a source joins a target set, or never.
struct ConnectionTime {
  std::optional<double> time;

  bool never() const noexcept { return !time.has_value(); }
  bool connected_at(double t) const noexcept { return time.has_value() && *time <= t; }
};

/// Sweep the schedule's open edges in clock order on a forest with one extra
/// node standing for the whole target set. A source inside the target set is
/// connected from t = 0.
inline ConnectionTime connection_time(const LatticeSpec& lattice, const OpeningSchedule& schedule, VertexId source,
                                      std::span<const VertexId> targets) {
  if (targets.empty()) throw std::invalid_argument("connection_time: empty target set");
  const auto sink = static_cast<std::uint32_t>(lattice.vertex_count());
  ClusterForest forest(lattice.vertex_count() + 1);
  for (VertexId v : targets) forest.unite(v, sink);
  if (forest.connected(source, sink)) return {0.0};
  for (EdgeId e : schedule.order) {
    if (!schedule.open[e]) continue;
    const Edge ed = lattice.endpoints(e);
    if (forest.unite(ed.u, ed.v) && forest.connected(source, sink)) return {schedule.clock[e]};
  }
  return {};
}

namespace detail {
inline void require_planar(const LatticeSpec& lattice, const char* what) {
  if (!lattice.is_planar_free_box()) throw LatticeError(std::string(what) + ": requires a free box with d = 2");
}
}  // namespace detail

/// First time the two faces orthogonal to `axis` are joined by an open path.
inline ConnectionTime crossing_time(const LatticeSpec& lattice, const OpeningSchedule& schedule, int axis = 0) {
  detail::require_planar(lattice, "crossing_time");
  const auto n = static_cast<std::uint32_t>(lattice.vertex_count());
  ClusterForest forest(lattice.vertex_count() + 2);
  for (VertexId v : lattice.face(axis, false)) forest.unite(v, n);
  for (VertexId v : lattice.face(axis, true)) forest.unite(v, n + 1);
  if (forest.connected(n, n + 1)) return {0.0};
  for (EdgeId e : schedule.order) {
    if (!schedule.open[e]) continue;
    const Edge ed = lattice.endpoints(e);
    if (forest.unite(ed.u, ed.v) && forest.connected(n, n + 1)) return {schedule.clock[e]};
  }
  return {};
}

/// Open path between the two faces orthogonal to `axis` (axis 0: left-right).
inline bool crossing(const Configuration& config, const LatticeSpec& lattice, int axis = 0) {
  detail::require_planar(lattice, "crossing");
  ClusterForest forest = components(config, lattice);
  std::unordered_set<std::uint32_t> low;
  for (VertexId v : lattice.face(axis, false)) low.insert(forest.find(v));
  for (VertexId v : lattice.face(axis, true))
    if (low.contains(forest.find(v))) return true;
  return false;
}

/// Number of distinct clusters touching both faces orthogonal to `axis`.
/// A finite-volume stand-in for the number of infinite clusters.
inline std::size_t count_crossing_clusters(const Configuration& config, const LatticeSpec& lattice, int axis = 0) {
  detail::require_planar(lattice, "count_crossing_clusters");
  ClusterForest forest = components(config, lattice);
  std::unordered_set<std::uint32_t> low, both;
  for (VertexId v : lattice.face(axis, false)) low.insert(forest.find(v));
  for (VertexId v : lattice.face(axis, true)) {
    const auto r = forest.find(v);
    if (low.contains(r)) both.insert(r);
  }
  return both.size();
}

/// Whether the closed dual edges contain a path between the dual rows beyond
/// the two faces parallel to `axis`, i.e. a dual circuit piece blocking every
/// crossing along `axis`. Independent of the primal union-find above.
inline bool dual_blocking_crossing(const Configuration& config, const LatticeSpec& lattice, int axis = 0) {
  detail::require_planar(lattice, "dual_blocking_crossing");
  // Work in coordinates where the crossing runs along x; the dual vertex
  // (i + 1/2, j + 1/2) has i in [x0, x1 - 1] and j in [y0 - 1, y1].
  const int other = 1 - axis;
  const int x0 = lattice.lower()[axis], x1 = lattice.upper()[axis];
  const int y0 = lattice.lower()[other], y1 = lattice.upper()[other];
  const int w = x1 - x0;      // dual columns
  const int h = y1 - y0 + 2;  // dual rows
  if (w <= 0) return false;   // a single column is crossed trivially
  auto node = [&](int i, int j) { return static_cast<std::uint32_t>((i - x0) * h + (j - (y0 - 1))); };
  const auto bottom = static_cast<std::uint32_t>(w * h), top = bottom + 1;
  ClusterForest forest(static_cast<std::size_t>(w * h) + 2);
  for (int i = x0; i < x1; ++i) {
    forest.unite(node(i, y0 - 1), bottom);
    forest.unite(node(i, y1), top);
  }
  auto primal = [&](int a, int b, int dir) {
    int c[2];
    c[axis] = a;
    c[other] = b;
    const VertexId u = *lattice.vertex_at(c);
    if (dir == axis) ++c[axis]; else ++c[other];
    const VertexId v = *lattice.vertex_at(c);
    return *lattice.edge_between(u, v);
  };
  // Dual edge crossing the primal edge (i,j)-(i+1,j) joins (i, j-1) and (i, j).
  for (int i = x0; i < x1; ++i)
    for (int j = y0; j <= y1; ++j)
      if (!config.is_open(primal(i, j, axis))) forest.unite(node(i, j - 1), node(i, j));
  // Dual edge crossing the primal edge (i,j)-(i,j+1), interior columns only,
  // joins (i-1, j) and (i, j).
  for (int i = x0 + 1; i < x1; ++i)
    for (int j = y0; j < y1; ++j)
      if (!config.is_open(primal(i, j, other))) forest.unite(node(i - 1, j), node(i, j));
  return forest.connected(bottom, top);
}

/// X_n = #{v : ||v|| = n, v connected to the origin at time t}, n = 0..L.
struct BoundaryCountSeries {
  double t = 0.0;
  Norm norm = Norm::linf;
  std::vector<std::int64_t> counts;
};

inline BoundaryCountSeries boundary_counts(const LatticeSpec& lattice, const OpeningSchedule& schedule, double t,
                                           Norm norm) {
  if (lattice.kind() != LatticeKind::box) throw LatticeError("boundary_counts: requires a box lattice");
  const auto origin = lattice.origin();
  if (!origin) throw LatticeError("boundary_counts: lattice does not contain the origin");
  int radius = lattice.upper()[0];
  for (int a = 0; a < lattice.dimension(); ++a)
    radius = std::min({radius, lattice.upper()[a], -lattice.lower()[a]});

  ClusterForest forest = components(config_at(schedule, t), lattice);
  BoundaryCountSeries series;
  series.t = t;
  series.norm = norm;
  series.counts.assign(static_cast<std::size_t>(radius) + 1, 0);
  const auto root = forest.find(*origin);
  for (VertexId v = 0; v < lattice.vertex_count(); ++v) {
    const int n = lattice.norm(v, norm);
    if (n <= radius && forest.find(v) == root) ++series.counts[static_cast<std::size_t>(n)];
  }
  return series;
}

}  // namespace cdperc
