#pragma once

// Closed self-avoiding circuits of the dual lattice Z^2 + (1/2,1/2) that
// surround the origin, their side statistics (n, r, m), and the edge classes
// used in the Peierls estimate: anomalous (A), unit-side (U), straight
// interior (B) and bend-adjacent (C).
//
// Coordinates are HalfPoints (doubled), so dual vertices have odd components
// and one lattice step is 2.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "cdperc/errors.hpp"
#include "cdperc/lattice.hpp"
#include "cdperc/stats.hpp"

namespace cdperc {

struct Step {
  int dx = 0;  // doubled, one of -2, 0, 2
  int dy = 0;
  friend bool operator==(const Step&, const Step&) = default;
  Step operator-() const { return {-dx, -dy}; }
};

/// A circuit <x_0, ..., x_{l-1}, x_l = x_0>, stored without the repeated
/// endpoint, anchored at its lexicographically lowest vertex and traversed
/// counterclockwise.
class Contour {
 public:
  /// Validate and canonicalize an arbitrary cyclic vertex list.
  static Contour from_vertices(std::vector<HalfPoint> pts) {
    const std::size_t l = pts.size();
    if (l < 4) throw std::invalid_argument("Contour: fewer than 4 vertices");
    std::set<HalfPoint> seen;
    for (std::size_t i = 0; i < l; ++i) {
      const HalfPoint& p = pts[i];
      const HalfPoint& q = pts[(i + 1) % l];
      if ((p.twice_x & 1) == 0 || (p.twice_y & 1) == 0) throw std::invalid_argument("Contour: vertex off the dual lattice");
      const int dx = q.twice_x - p.twice_x, dy = q.twice_y - p.twice_y;
      if (std::abs(dx) + std::abs(dy) != 2) throw std::invalid_argument("Contour: consecutive vertices not adjacent");
      if (!seen.insert(p).second) throw std::invalid_argument("Contour: self-intersection");
    }
    // counterclockwise: positive signed area
    long long area2 = 0;
    for (std::size_t i = 0; i < l; ++i) {
      const HalfPoint& p = pts[i];
      const HalfPoint& q = pts[(i + 1) % l];
      area2 += static_cast<long long>(p.twice_x) * q.twice_y - static_cast<long long>(q.twice_x) * p.twice_y;
    }
    if (area2 < 0) std::reverse(pts.begin(), pts.end());
    const auto lowest = std::min_element(pts.begin(), pts.end());
    std::rotate(pts.begin(), lowest, pts.end());
    Contour c;
    c.pts_ = std::move(pts);
    c.compute_stats();
    return c;
  }

  std::size_t n() const noexcept { return pts_.size(); }
  int r() const noexcept { return r_; }
  int m() const noexcept { return m_; }
  std::span<const HalfPoint> vertices() const noexcept { return pts_; }
  const HalfPoint& vertex(std::ptrdiff_t i) const { return pts_[wrap(i)]; }
  HalfPoint anchor() const { return pts_.front(); }

  /// s_i = x_{i+1} - x_i, indices cyclic.
  Step step(std::ptrdiff_t i) const {
    const HalfPoint& p = vertex(i);
    const HalfPoint& q = vertex(i + 1);
    return {q.twice_x - p.twice_x, q.twice_y - p.twice_y};
  }
  /// Direction changes at vertex i.
  bool turns_at(std::ptrdiff_t i) const { return !(step(i - 1) == step(i)); }
  /// Edge i = <x_i, x_{i+1}> is a whole side of length one.
  bool is_unit(std::ptrdiff_t i) const { return turns_at(i) && turns_at(i + 1); }
  DualEdge edge(std::ptrdiff_t i) const { return DualEdge::make(vertex(i), vertex(i + 1)); }

  /// Even-odd test of the ray from the primal origin towards +x.
  bool surrounds_origin() const {
    int crossings = 0;
    for (std::size_t i = 0; i < n(); ++i) {
      const HalfPoint& p = pts_[i];
      const HalfPoint& q = vertex(static_cast<std::ptrdiff_t>(i) + 1);
      if (p.twice_x == q.twice_x && p.twice_x > 0 && std::min(p.twice_y, q.twice_y) == -1) ++crossings;
    }
    return crossings % 2 == 1;
  }

  friend bool operator==(const Contour& a, const Contour& b) { return a.pts_ == b.pts_; }
  friend bool operator<(const Contour& a, const Contour& b) { return a.pts_ < b.pts_; }

 private:
  std::size_t wrap(std::ptrdiff_t i) const {
    const auto l = static_cast<std::ptrdiff_t>(pts_.size());
    return static_cast<std::size_t>(((i % l) + l) % l);
  }
  void compute_stats() {
    r_ = m_ = 0;
    for (std::size_t i = 0; i < n(); ++i) {
      const auto si = static_cast<std::ptrdiff_t>(i);
      r_ += turns_at(si);
      m_ += is_unit(si);
    }
  }

  std::vector<HalfPoint> pts_;
  int r_ = 0;
  int m_ = 0;
};

// --- enumeration --------------------------------------------------------------

using NrmKey = std::tuple<int, int, int>;

struct ContourCensus {
  int n_max = 0;
  std::map<NrmKey, std::vector<Contour>> cells;

  std::size_t count(int n, int r, int m) const {
    auto it = cells.find({n, r, m});
    return it == cells.end() ? 0 : it->second.size();
  }
  std::size_t count(int n) const {
    std::size_t total = 0;
    for (const auto& [key, list] : cells)
      if (std::get<0>(key) == n) total += list.size();
    return total;
  }
};

inline constexpr int kDefaultContourBudget = 14;

namespace detail {

// All circuits of length n anchored at `anchor` that surround the origin.
// The first step goes +x; anchored lexicographic minimality forces the last
// step to arrive from +y, so each geometric circuit appears exactly once.
inline void enumerate_from_anchor(int n, HalfPoint anchor, std::vector<Contour>& out) {
  const int span = n + 1;  // unit cells per axis in the local grid
  const int ox = anchor.twice_x, oy = anchor.twice_y - 2 * (n / 2);
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(span * (2 * span)), 0);
  auto cell = [&](int x, int y) { return static_cast<std::size_t>(((x - ox) / 2) * (2 * span) + (y - oy) / 2); };
  std::vector<HalfPoint> path;
  path.reserve(static_cast<std::size_t>(n));
  path.push_back(anchor);
  visited[cell(anchor.twice_x, anchor.twice_y)] = 1;
  constexpr std::array<Step, 4> kSteps{{{2, 0}, {0, 2}, {-2, 0}, {0, -2}}};

  auto rec = [&](auto&& self) -> void {
    const HalfPoint cur = path.back();
    const int len = static_cast<int>(path.size());
    for (const Step& s : kSteps) {
      if (len == 1 && !(s == Step{2, 0})) continue;
      const HalfPoint nx{cur.twice_x + s.dx, cur.twice_y + s.dy};
      if (nx == anchor) {
        if (len == n) {
          Contour c = Contour::from_vertices(path);
          if (c.surrounds_origin()) out.push_back(std::move(c));
        }
        continue;
      }
      if (len >= n || nx < anchor) continue;
      const int dist = (std::abs(nx.twice_x - anchor.twice_x) + std::abs(nx.twice_y - anchor.twice_y)) / 2;
      if (dist > n - len) continue;
      const std::size_t c = cell(nx.twice_x, nx.twice_y);
      if (visited[c]) continue;
      visited[c] = 1;
      path.push_back(nx);
      self(self);
      path.pop_back();
      visited[c] = 0;
    }
  };
  rec(rec);
}

}  // namespace detail

/// Every contour surrounding the origin with n <= n_max bonds, grouped by
/// (n, r, m). Sharded by anchor vertex; the result does not depend on
/// `threads`.
inline ContourCensus enumerate_contours(int n_max, int threads = 1, int budget = kDefaultContourBudget) {
  if (n_max < 4 || n_max % 2 != 0) throw std::invalid_argument("enumerate_contours: n_max must be even and >= 4");
  if (n_max > budget) {
    throw BudgetError("enumerate_contours: n_max " + std::to_string(n_max) + " exceeds budget " +
                      std::to_string(budget));
  }
  ContourCensus census;
  census.n_max = n_max;
  struct Task {
    int n;
    HalfPoint anchor;
  };
  std::vector<Task> tasks;
  for (int n = 4; n <= n_max; n += 2) {
    const int reach = 2 * (n / 2 - 2);  // width and height are at most n/2 - 1
    for (int ax = -1 - reach; ax <= -1; ax += 2)
      for (int ay = -1 - reach; ay <= 1 + reach; ay += 2) tasks.push_back({n, {ax, ay}});
  }
  std::vector<std::vector<Contour>> found(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    detail::enumerate_from_anchor(tasks[i].n, tasks[i].anchor, found[i]);
  });
  for (auto& list : found)
    for (Contour& c : list)
      census.cells[{static_cast<int>(c.n()), c.r(), c.m()}].push_back(std::move(c));
  for (auto& [key, list] : census.cells) std::sort(list.begin(), list.end());
  return census;
}

// --- anomalies ------------------------------------------------------------------

struct AnomalyTemplate {
  int id = 0;  // 1, 2, 3
  std::array<DualEdge, 3> edges;
  DualEdge centre;
};

/// The three base triplets; the shared centre is <(-1/2, 1/2), (1/2, 1/2)>.
inline const std::array<AnomalyTemplate, 3>& anomaly_templates() {
  static const std::array<AnomalyTemplate, 3> templates = [] {
    auto E = [](int ax, int ay, int bx, int by) { return DualEdge::make({ax, ay}, {bx, by}); };
    const DualEdge centre = E(-1, 1, 1, 1);
    return std::array<AnomalyTemplate, 3>{{
        {1, {E(-1, -1, 1, -1), E(-1, 1, 1, 1), E(-1, 3, 1, 3)}, centre},
        {2, {E(-1, -1, 1, -1), E(-1, 1, 1, 1), E(-1, 1, -1, 3)}, centre},
        {3, {E(1, -1, 1, 1), E(-1, 1, 1, 1), E(-1, 1, -1, 3)}, centre},
    }};
  }();
  return templates;
}

/// The eight symmetries of the square fixing the origin: optional swap of
/// axes, then sign flips. Index bits: 4 = swap, 2 = flip y, 1 = flip x.
inline HalfPoint apply_symmetry(int index, HalfPoint p) {
  if (index & 4) std::swap(p.twice_x, p.twice_y);
  if (index & 2) p.twice_y = -p.twice_y;
  if (index & 1) p.twice_x = -p.twice_x;
  return p;
}

inline DualEdge apply_symmetry(int index, const DualEdge& e) {
  return DualEdge::make(apply_symmetry(index, e.a), apply_symmetry(index, e.b));
}

inline DualEdge translate(const DualEdge& e, int dx, int dy) {
  return {{e.a.twice_x + dx, e.a.twice_y + dy}, {e.b.twice_x + dx, e.b.twice_y + dy}};
}

/// An isometric image of a template sitting inside a contour.
struct AnomalyInstance {
  int template_id = 0;
  int symmetry = 0;
  int shift_x = 0;  // doubled
  int shift_y = 0;
  std::array<DualEdge, 3> edges;
  DualEdge centre;
};

/// Every anomaly A with A contained in E(gamma), deduplicated by edge set.
inline std::vector<AnomalyInstance> find_anomalies(const Contour& gamma) {
  std::unordered_set<DualEdge, DualEdgeHash> edge_set;
  for (std::size_t i = 0; i < gamma.n(); ++i) edge_set.insert(gamma.edge(static_cast<std::ptrdiff_t>(i)));

  std::vector<AnomalyInstance> found;
  std::set<std::array<DualEdge, 3>> seen;
  for (const AnomalyTemplate& t : anomaly_templates()) {
    for (int sym = 0; sym < 8; ++sym) {
      std::array<DualEdge, 3> image;
      for (int j = 0; j < 3; ++j) image[j] = apply_symmetry(sym, t.edges[j]);
      const DualEdge centre = apply_symmetry(sym, t.centre);
      for (const DualEdge& e : edge_set) {
        for (const DualEdge& piece : image) {
          const int dx = e.a.twice_x - piece.a.twice_x, dy = e.a.twice_y - piece.a.twice_y;
          if (!(translate(piece, dx, dy) == e)) continue;
          std::array<DualEdge, 3> placed;
          bool inside = true;
          for (int j = 0; j < 3 && inside; ++j) {
            placed[j] = translate(image[j], dx, dy);
            inside = edge_set.contains(placed[j]);
          }
          if (!inside) continue;
          std::array<DualEdge, 3> key = placed;
          std::sort(key.begin(), key.end());
          if (!seen.insert(key).second) continue;
          found.push_back({t.id, sym, dx, dy, placed, translate(centre, dx, dy)});
        }
      }
    }
  }
  return found;
}

enum class EdgeClass : std::uint8_t { anomalous, unit, straight, bend };

/// Per-edge membership in A, U, B, C. U may overlap A; B and C exclude A,
/// and C also excludes U.
struct ContourClassification {
  std::vector<std::uint8_t> in_a, in_u, in_b, in_c;
  std::vector<AnomalyInstance> anomalies;

  static std::size_t count(const std::vector<std::uint8_t>& v) {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), std::uint8_t{1}));
  }
  std::size_t a_count() const { return count(in_a); }
  std::size_t u_count() const { return count(in_u); }
  std::size_t b_count() const { return count(in_b); }
  std::size_t c_count() const { return count(in_c); }
  std::size_t u_minus_a_count() const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < in_u.size(); ++i) k += in_u[i] && !in_a[i];
    return k;
  }
};

inline ContourClassification classify_contour(const Contour& gamma) {
  ContourClassification cls;
  const std::size_t n = gamma.n();
  cls.in_a.assign(n, 0);
  cls.in_u.assign(n, 0);
  cls.in_b.assign(n, 0);
  cls.in_c.assign(n, 0);
  cls.anomalies = find_anomalies(gamma);

  std::unordered_set<DualEdge, DualEdgeHash> anomalous;
  for (const AnomalyInstance& a : cls.anomalies)
    for (const DualEdge& e : a.edges) anomalous.insert(e);

  for (std::size_t i = 0; i < n; ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    const bool a = anomalous.contains(gamma.edge(si));
    const bool front = gamma.turns_at(si), back = gamma.turns_at(si + 1);
    const bool u = front && back;
    cls.in_a[i] = a;
    cls.in_u[i] = u;
    cls.in_b[i] = !front && !back && !a;
    cls.in_c[i] = (front || back) && !a && !u;
  }
  return cls;
}

// --- the injection U -> A ---------------------------------------------------------

struct InjectionResult {
  bool ok = false;
  std::vector<std::pair<std::size_t, std::size_t>> mapping;  // edge index -> edge index
  std::string failure;
};

/// Build F: U(gamma) -> A(gamma): identity on U and A; otherwise the unit side
/// is a U-turn and F picks the end of the nearer of the two adjacent sides
/// (the later one on ties). Checks codomain membership and injectivity.
inline InjectionResult anomaly_injection(const Contour& gamma, const ContourClassification& cls) {
  InjectionResult res;
  const auto l = static_cast<std::ptrdiff_t>(gamma.n());
  auto index = [&](std::ptrdiff_t i) { return static_cast<std::size_t>(((i % l) + l) % l); };

  for (std::ptrdiff_t i = 0; i < l; ++i) {
    if (!cls.in_u[index(i)]) continue;
    if (cls.in_a[index(i)]) {
      res.mapping.emplace_back(index(i), index(i));
      continue;
    }
    const Step w = gamma.step(i + 1);
    if (!(w == -gamma.step(i - 1))) {
      res.failure = "unit side " + std::to_string(i) + " is neither anomalous nor a U-turn";
      return res;
    }
    std::ptrdiff_t ahead = 0, behind = 0;
    for (std::ptrdiff_t k = 1; k <= l; ++k)
      if (!(gamma.step(i + k) == w)) {
        ahead = k;
        break;
      }
    for (std::ptrdiff_t k = 1; k <= l; ++k)
      if (!(-gamma.step(i - k) == w)) {
        behind = k;
        break;
      }
    if (ahead == 0 || behind == 0) {
      res.failure = "side run never ends around edge " + std::to_string(i);
      return res;
    }
    const std::size_t target = ahead <= behind ? index(i + ahead - 1) : index(i - behind + 1);
    res.mapping.emplace_back(index(i), target);
  }

  std::set<std::size_t> images;
  for (const auto& [from, to] : res.mapping) {
    if (!cls.in_a[to]) {
      res.failure = "F(" + std::to_string(from) + ") = " + std::to_string(to) + " is not anomalous";
      return res;
    }
    if (!images.insert(to).second) {
      res.failure = "F is not injective at image " + std::to_string(to);
      return res;
    }
  }
  res.ok = true;
  return res;
}

/// The anomaly count bound applies to every contour except the r = 4, m = 2
/// rectangles.
inline bool anomaly_bound_applies(const Contour& gamma) { return gamma.r() > 4 || gamma.m() != 2; }

// --- contour count bound ---------------------------------------------------------

enum class BinomialConvention {
  composition,  // C(-1,-1) = 1: the empty composition of 0 (all sides unit)
  standard,     // C(a,b) = 0 whenever b < 0
};

/// Exact binomial coefficient, 0 outside 0 <= k <= n. Throws on overflow.
inline std::uint64_t binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (long long i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (acc > UINT64_MAX) throw InvariantError("binomial: overflow");
  }
  return static_cast<std::uint64_t>(acc);
}

/// (n^2/4) 2^r C(r,m) C(n-r-1, r-m-1), exact.
inline std::uint64_t lemma2_bound(int n, int r, int m, BinomialConvention conv = BinomialConvention::composition) {
  if (n < 4 || m < 0 || m > r || r > n) throw std::invalid_argument("lemma2_bound: need n >= 4 and 0 <= m <= r <= n");
  const long long top = n - r - 1, bottom = r - m - 1;
  std::uint64_t sides;
  if (top == -1 && bottom == -1) {
    sides = conv == BinomialConvention::composition ? 1 : 0;
  } else {
    sides = binomial(top, bottom);
  }
  unsigned __int128 acc = static_cast<unsigned __int128>(n) * static_cast<unsigned>(n) / 4;
  acc <<= r;
  acc *= binomial(r, m);
  acc *= sides;
  if (acc > UINT64_MAX) throw InvariantError("lemma2_bound: overflow");
  return static_cast<std::uint64_t>(acc);
}

// --- census summary ----------------------------------------------------------

struct CensusRow {
  int n = 0, r = 0, m = 0;
  std::size_t count = 0;
  std::uint64_t bound = 0;           // composition reading
  std::uint64_t bound_standard = 0;  // C(-1,-1) = 0 reading
  bool bound_holds = false;
  std::size_t anomaly_checked = 0;  // contours where #A >= #U is claimed
  std::size_t anomaly_pass = 0;     // #A >= #U and F verified
  std::size_t anomaly_fail = 0;
};

struct CensusFailure {
  Contour contour;
  std::size_t a_count = 0;
  std::size_t u_count = 0;
  std::string reason;
};

struct CensusReport {
  std::vector<CensusRow> rows;
  std::vector<CensusFailure> failures;
  bool partitions_ok = true;
};

inline CensusReport summarize_census(const ContourCensus& census) {
  CensusReport report;
  for (const auto& [key, list] : census.cells) {
    const auto [n, r, m] = key;
    CensusRow row;
    row.n = n;
    row.r = r;
    row.m = m;
    row.count = list.size();
    row.bound = lemma2_bound(n, r, m, BinomialConvention::composition);
    row.bound_standard = lemma2_bound(n, r, m, BinomialConvention::standard);
    row.bound_holds = row.count <= row.bound;
    for (const Contour& c : list) {
      const ContourClassification cls = classify_contour(c);
      if (cls.u_count() != static_cast<std::size_t>(c.m()) ||
          cls.a_count() + cls.b_count() + cls.c_count() + cls.u_minus_a_count() != c.n())
        report.partitions_ok = false;
      if (!anomaly_bound_applies(c)) continue;
      ++row.anomaly_checked;
      const InjectionResult inj = anomaly_injection(c, cls);
      if (cls.a_count() >= cls.u_count() && inj.ok) {
        ++row.anomaly_pass;
      } else {
        ++row.anomaly_fail;
        std::string reason = cls.a_count() < cls.u_count() ? "#A < #U" : "";
        if (!inj.ok) reason += (reason.empty() ? "" : "; ") + inj.failure;
        report.failures.push_back({c, cls.a_count(), cls.u_count(), reason});
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cdperc
