#pragma once

// Finite graph instances: boxes of Z^d (free or periodic boundary), free
// rectangles, and truncated d-ary trees. Index layout is part of the contract:
//
//   box vertices  lexicographic in (x_0, ..., x_{d-1}), x_0 most significant
//   box edges     by lower endpoint index, then axis (edge v -> v + e_axis)
//   tree          heap order: root 0, children of v are v*d+1 .. v*d+d,
//                 the edge to child c has index c-1
//
// A LatticeSpec is immutable after construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdperc/errors.hpp"

namespace cdperc {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class LatticeKind { box, tree };
enum class Boundary { free, periodic };
enum class Norm { l1, linf };

struct Edge {
  VertexId u;
  VertexId v;
};

/// Memory budget for instance construction, from CDPERC_BUDGET_MB (default 4096).
inline std::size_t memory_budget_bytes() {
  std::size_t mb = 4096;
  if (const char* env = std::getenv("CDPERC_BUDGET_MB")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) mb = static_cast<std::size_t>(v);
  }
  return mb * 1024 * 1024;
}

namespace detail {
// Rough per-instance footprint: lattice arrays plus one clock sample, one
// schedule and one union-find, which every experiment holds per worker.
inline void check_budget(long double vertices, long double edges) {
  const long double bytes = vertices * 24.0L + edges * 64.0L;
  if (vertices > 4.0e9L || edges > 4.0e9L ||
      bytes > static_cast<long double>(memory_budget_bytes())) {
    throw SizingError("instance with " + std::to_string(static_cast<double>(vertices)) +
                      " vertices and " + std::to_string(static_cast<double>(edges)) +
                      " edges exceeds the memory budget (CDPERC_BUDGET_MB)");
  }
}
}  // namespace detail

class LatticeSpec {
 public:
  LatticeKind kind() const noexcept { return kind_; }
  /// Box dimension; 1 for trees.
  int dimension() const noexcept { return dim_; }
  /// Tree arity; 0 for boxes.
  int arity() const noexcept { return arity_; }
  /// Tree depth h; 0 for boxes.
  int depth() const noexcept { return depth_; }
  Boundary boundary() const noexcept { return boundary_; }

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  Edge endpoints(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  VertexId other(EdgeId e, VertexId v) const {
    const Edge& ed = edges_[e];
    return ed.u == v ? ed.v : ed.u;
  }
  /// Axis of a box edge; 0 for tree edges.
  int axis(EdgeId e) const { return axis_.empty() ? 0 : axis_[e]; }

  std::span<const EdgeId> incident(VertexId v) const {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::optional<EdgeId> edge_between(VertexId a, VertexId b) const {
    for (EdgeId e : incident(a))
      if (other(e, a) == b) return e;
    return std::nullopt;
  }

  // --- boxes -------------------------------------------------------------

  std::span<const int> lower() const noexcept { return lower_; }
  std::span<const int> upper() const noexcept { return upper_; }
  int extent(int axis) const { return upper_[axis] - lower_[axis] + 1; }

  std::vector<int> coordinates(VertexId v) const {
    require_box("coordinates");
    std::vector<int> x(static_cast<std::size_t>(dim_));
    std::size_t rest = v;
    for (int a = dim_ - 1; a >= 0; --a) {
      const auto span = static_cast<std::size_t>(extent(a));
      x[a] = lower_[a] + static_cast<int>(rest % span);
      rest /= span;
    }
    return x;
  }

  int coordinate(VertexId v, int axis) const {
    require_box("coordinate");
    return lower_[axis] + static_cast<int>((v / strides_[axis]) % static_cast<std::size_t>(extent(axis)));
  }

  std::optional<VertexId> vertex_at(std::span<const int> x) const {
    require_box("vertex_at");
    if (static_cast<int>(x.size()) != dim_) return std::nullopt;
    std::size_t idx = 0;
    for (int a = 0; a < dim_; ++a) {
      if (x[a] < lower_[a] || x[a] > upper_[a]) return std::nullopt;
      idx += static_cast<std::size_t>(x[a] - lower_[a]) * strides_[a];
    }
    return static_cast<VertexId>(idx);
  }

  std::optional<VertexId> origin() const {
    if (kind_ == LatticeKind::tree) return VertexId{0};
    std::vector<int> zero(static_cast<std::size_t>(dim_), 0);
    return vertex_at(zero);
  }

  /// Norm of a box vertex's coordinates (the box need not be centred).
  int norm(VertexId v, Norm which) const {
    int acc = 0;
    for (int a = 0; a < dim_; ++a) {
      const int c = std::abs(coordinate(v, a));
      acc = which == Norm::l1 ? acc + c : std::max(acc, c);
    }
    return acc;
  }

  /// Shell {v : ||v|| = n} of a box.
  std::vector<VertexId> shell(int n, Norm which) const {
    require_box("shell");
    std::vector<VertexId> out;
    for (VertexId v = 0; v < vertex_count_; ++v)
      if (norm(v, which) == n) out.push_back(v);
    return out;
  }

  /// Face x_axis = lower (high=false) or x_axis = upper (high=true) of a free box.
  std::vector<VertexId> face(int axis, bool high) const {
    require_box("face");
    if (axis < 0 || axis >= dim_) throw LatticeError("face: axis out of range");
    std::vector<VertexId> out;
    const int target = high ? upper_[axis] : lower_[axis];
    for (VertexId v = 0; v < vertex_count_; ++v)
      if (coordinate(v, axis) == target) out.push_back(v);
    return out;
  }

  bool is_planar_free_box() const noexcept {
    return kind_ == LatticeKind::box && dim_ == 2 && boundary_ == Boundary::free;
  }

  // --- trees -------------------------------------------------------------

  int generation(VertexId v) const {
    require_tree("generation");
    int g = 0;
    std::size_t x = v;
    while (x != 0) {
      x = (x - 1) / static_cast<std::size_t>(arity_);
      ++g;
    }
    return g;
  }
  VertexId parent(VertexId v) const {
    require_tree("parent");
    return static_cast<VertexId>((v - 1) / static_cast<VertexId>(arity_));
  }
  VertexId first_child(VertexId v) const {
    require_tree("first_child");
    return static_cast<VertexId>(v * static_cast<VertexId>(arity_) + 1);
  }
  bool is_leaf(VertexId v) const {
    require_tree("is_leaf");
    return static_cast<std::size_t>(v) * arity_ + 1 >= vertex_count_;
  }
  /// Index of the first vertex of generation g.
  VertexId level_begin(int g) const {
    require_tree("level_begin");
    std::size_t begin = 0, width = 1;
    for (int i = 0; i < g; ++i) {
      begin += width;
      width *= static_cast<std::size_t>(arity_);
    }
    return static_cast<VertexId>(begin);
  }
  /// Edge joining child c to its parent.
  static EdgeId edge_to_child(VertexId c) { return c - 1; }

 private:
  friend LatticeSpec build_box(std::span<const int>, std::span<const int>, Boundary);
  friend LatticeSpec build_tree(int, int);

  void require_box(const char* what) const {
    if (kind_ != LatticeKind::box) throw LatticeError(std::string(what) + ": requires a box lattice");
  }
  void require_tree(const char* what) const {
    if (kind_ != LatticeKind::tree) throw LatticeError(std::string(what) + ": requires a tree lattice");
  }

  void build_incidence() {
    offsets_.assign(vertex_count_ + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < vertex_count_; ++i) offsets_[i + 1] += offsets_[i];
    incidence_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      incidence_[fill[edges_[id].u]++] = id;
      incidence_[fill[edges_[id].v]++] = id;
    }
  }

  LatticeKind kind_ = LatticeKind::box;
  int dim_ = 1;
  int arity_ = 0;
  int depth_ = 0;
  Boundary boundary_ = Boundary::free;
  std::size_t vertex_count_ = 0;
  std::vector<int> lower_, upper_;
  std::vector<std::size_t> strides_;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> axis_;
  std::vector<std::size_t> offsets_;
  std::vector<EdgeId> incidence_;
};

/// Box with per-axis inclusive coordinate bounds.
inline LatticeSpec build_box(std::span<const int> lower, std::span<const int> upper, Boundary boundary) {
  const int d = static_cast<int>(lower.size());
  if (d < 1 || upper.size() != lower.size()) throw LatticeError("build_box: bad bounds");
  long double vertices = 1;
  for (int a = 0; a < d; ++a) {
    if (upper[a] < lower[a]) throw LatticeError("build_box: empty extent");
    vertices *= static_cast<long double>(upper[a] - lower[a] + 1);
  }
  if (boundary == Boundary::periodic) {
    for (int a = 0; a < d; ++a)
      if (upper[a] - lower[a] + 1 < 3) throw LatticeError("build_box: periodic boundary requires side >= 3");
  }
  detail::check_budget(vertices, vertices * d);

  LatticeSpec s;
  s.kind_ = LatticeKind::box;
  s.dim_ = d;
  s.boundary_ = boundary;
  s.lower_.assign(lower.begin(), lower.end());
  s.upper_.assign(upper.begin(), upper.end());
  s.vertex_count_ = static_cast<std::size_t>(vertices);
  s.strides_.assign(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a) s.strides_[a] = s.strides_[a + 1] * static_cast<std::size_t>(s.extent(a + 1));

  s.edges_.reserve(s.vertex_count_ * static_cast<std::size_t>(d));
  std::vector<int> x(static_cast<std::size_t>(d));
  for (VertexId v = 0; v < s.vertex_count_; ++v) {
    for (int a = 0; a < d; ++a) x[a] = s.coordinate(v, a);
    for (int a = 0; a < d; ++a) {
      if (x[a] < s.upper_[a]) {
        s.edges_.push_back({v, static_cast<VertexId>(v + s.strides_[a])});
      } else if (boundary == Boundary::periodic) {
        const std::size_t wrap = static_cast<std::size_t>(s.extent(a) - 1) * s.strides_[a];
        s.edges_.push_back({v, static_cast<VertexId>(v - wrap)});
      } else {
        continue;
      }
      s.axis_.push_back(static_cast<std::uint8_t>(a));
    }
  }
  s.build_incidence();
  return s;
}

/// Box [-L, L]^d (free) or the torus (Z/LZ)^d with coordinates [0, L-1] (periodic).
inline LatticeSpec build_box_lattice(int d, int L, Boundary boundary) {
  if (d < 1) throw LatticeError("build_box_lattice: dimension must be >= 1");
  if (L < 1) throw LatticeError("build_box_lattice: side must be >= 1");
  if (boundary == Boundary::periodic && L < 3) throw LatticeError("build_box_lattice: periodic requires L >= 3");
  const long double side = boundary == Boundary::free ? 2.0L * L + 1 : L;
  detail::check_budget(std::pow(side, static_cast<long double>(d)), d * std::pow(side, static_cast<long double>(d)));
  std::vector<int> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    lo[a] = boundary == Boundary::free ? -L : 0;
    hi[a] = boundary == Boundary::free ? L : L - 1;
  }
  return build_box(lo, hi, boundary);
}

/// Free rectangle with `width` x `height` vertices, coordinates [0,width-1] x [0,height-1].
inline LatticeSpec build_rectangle(int width, int height) {
  if (width < 1 || height < 1) throw LatticeError("build_rectangle: sides must be >= 1");
  const int lo[2] = {0, 0};
  const int hi[2] = {width - 1, height - 1};
  return build_box(lo, hi, Boundary::free);
}

/// Crossing geometry for size L: L+1 columns by L rows of vertices. For the
/// unrestricted model at t = 1/2 the left-right crossing has probability 1/2
/// exactly (the rectangle is isomorphic to its rotated dual).
inline LatticeSpec build_crossing_rectangle(int L) {
  if (L < 1) throw LatticeError("build_crossing_rectangle: L must be >= 1");
  return build_rectangle(L + 1, L);
}

inline LatticeSpec build_tree(int d, int h) {
  if (d < 2) throw LatticeError("build_tree: arity must be >= 2");
  if (h < 1) throw LatticeError("build_tree: depth must be >= 1");
  const long double vertices = (std::pow(static_cast<long double>(d), h + 1) - 1) / (d - 1);
  detail::check_budget(vertices, vertices - 1);

  LatticeSpec s;
  s.kind_ = LatticeKind::tree;
  s.dim_ = 1;
  s.arity_ = d;
  s.depth_ = h;
  s.vertex_count_ = static_cast<std::size_t>(vertices + 0.5L);
  s.edges_.reserve(s.vertex_count_ - 1);
  for (VertexId c = 1; c < s.vertex_count_; ++c)
    s.edges_.push_back({static_cast<VertexId>((c - 1) / static_cast<VertexId>(d)), c});
  s.build_incidence();
  return s;
}

// --- constraints -----------------------------------------------------------

/// Per-vertex degree caps. Caps above a vertex's degree are legal and inert.
class ConstraintSpec {
 public:
  static ConstraintSpec uniform(const LatticeSpec& lattice, int k) {
    if (k < 1) throw LatticeError("ConstraintSpec: caps must be >= 1");
    ConstraintSpec c;
    c.caps_.assign(lattice.vertex_count(), static_cast<std::uint32_t>(k));
    return c;
  }
  static ConstraintSpec per_vertex(std::vector<std::uint32_t> caps) {
    for (auto k : caps)
      if (k < 1) throw LatticeError("ConstraintSpec: caps must be >= 1");
    ConstraintSpec c;
    c.caps_ = std::move(caps);
    return c;
  }
  std::uint32_t cap(VertexId v) const { return caps_[v]; }
  std::size_t size() const noexcept { return caps_.size(); }

 private:
  std::vector<std::uint32_t> caps_;
};

// --- planar duality --------------------------------------------------------

/// Point with half-integer coordinates, stored doubled (twice_x = 2x).
struct HalfPoint {
  int twice_x = 0;
  int twice_y = 0;
  double x() const noexcept { return twice_x / 2.0; }
  double y() const noexcept { return twice_y / 2.0; }
  friend auto operator<=>(const HalfPoint&, const HalfPoint&) = default;
};

/// Unordered segment between two half-points, normalized so a < b.
struct DualEdge {
  HalfPoint a;
  HalfPoint b;
  static DualEdge make(HalfPoint p, HalfPoint q) { return q < p ? DualEdge{q, p} : DualEdge{p, q}; }
  friend auto operator<=>(const DualEdge&, const DualEdge&) = default;
};

struct DualEdgeHash {
  std::size_t operator()(const DualEdge& e) const noexcept {
    auto pack = [](HalfPoint p) {
      return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.twice_x)) << 32) |
             static_cast<std::uint32_t>(p.twice_y);
    };
    return static_cast<std::size_t>(pack(e.a) * 0x9E3779B97F4A7C15ULL ^ (pack(e.b) + 0x632BE59BD9B4E019ULL));
  }
};

/// The dual segment crossing the primal unit edge from p in direction axis.
inline DualEdge dual_of_primal(int px, int py, int axis) {
  if (axis == 0) return DualEdge::make({2 * px + 1, 2 * py - 1}, {2 * px + 1, 2 * py + 1});
  return DualEdge::make({2 * px - 1, 2 * py + 1}, {2 * px + 1, 2 * py + 1});
}

/// Bijection between the primal edges of a free planar box and their duals in
/// the shifted lattice Z^2 + (1/2, 1/2).
class DualEdgeMap {
 public:
  explicit DualEdgeMap(const LatticeSpec& lattice) {
    if (!lattice.is_planar_free_box()) throw LatticeError("dual_map: requires a free box with d = 2");
    dual_.reserve(lattice.edge_count());
    for (EdgeId e = 0; e < lattice.edge_count(); ++e) {
      const VertexId u = lattice.endpoints(e).u;
      const DualEdge de = dual_of_primal(lattice.coordinate(u, 0), lattice.coordinate(u, 1), lattice.axis(e));
      dual_.push_back(de);
      primal_.emplace(de, e);
    }
  }

  std::size_t size() const noexcept { return dual_.size(); }
  const DualEdge& dual(EdgeId e) const { return dual_[e]; }
  std::optional<EdgeId> primal(const DualEdge& d) const {
    auto it = primal_.find(d);
    if (it == primal_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<DualEdge> dual_;
  std::unordered_map<DualEdge, EdgeId, DualEdgeHash> primal_;
};

inline DualEdgeMap dual_map(const LatticeSpec& lattice) { return DualEdgeMap(lattice); }

}  // namespace cdperc
