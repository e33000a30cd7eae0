#pragma once

// Red bonds on the d-ary tree with cap 3.
//
// An edge <x, x.a> is in the forest F when at most one of its brothers rang
// first. T is the component of F containing the root; an edge of T is red when
// at most two of its sons rang first. Red edges always open under k = 3.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "cdperc/dynamics.hpp"
#include "cdperc/errors.hpp"
#include "cdperc/lattice.hpp"
#include "cdperc/rational.hpp"

namespace cdperc {

struct RedProb {
  Rational given_first;   // e rang first among the two forest brothers
  Rational given_second;  // e rang second
  RationalProb total;     // (given_first + given_second) / 2
};

/// Closed formulas, with (2d-j)!/(2d)! written as 1/((2d)(2d-1)...(2d-j+1)).
inline RedProb red_prob(int d) {
  if (d < 2) throw std::invalid_argument("red_prob: d must be >= 2");
  const std::uint64_t n = 2 * static_cast<std::uint64_t>(d), D = static_cast<std::uint64_t>(d);
  const Rational inv2{1, n * (n - 1)};
  const Rational inv3 = inv2 * Rational{1, n - 2};
  const Rational inv4 = inv3 * Rational{1, n - 3};
  const Rational dd{D};

  RedProb r;
  r.given_first = dd * (Rational{1, n} + Rational{D} * inv2 + Rational{D * (D - 1)} * inv3);
  r.given_second =
      dd * (Rational{D - 1} * inv2 + Rational{2 * D * (D - 1)} * inv3 + Rational{3 * D * (D - 1) * (D - 1)} * inv4);
  r.total = RationalProb((r.given_first + r.given_second) * Rational{1, 2});
  return r;
}

/// Every ordering of the 2d relevant clocks: e, its d-1 brothers and its d
/// sons. Conditions on e ranking first or second among the brothers.
inline RedProb red_prob_oracle(int d, int max_d = 5) {
  if (d < 2) throw std::invalid_argument("red_prob_oracle: d must be >= 2");
  if (d > max_d) throw BudgetError("red_prob_oracle: (2d)! enumeration beyond d = " + std::to_string(max_d));
  // slot 0 = e, 1..d-1 = brothers, d..2d-1 = sons; rank[slot] = clock order
  std::vector<int> rank(static_cast<std::size_t>(2 * d));
  std::iota(rank.begin(), rank.end(), 0);
  std::uint64_t red[2] = {0, 0}, seen[2] = {0, 0};
  do {
    int before = 0;
    for (int s = 1; s < d; ++s) before += rank[s] < rank[0];
    if (before > 1) continue;
    int sons = 0;
    for (int s = d; s < 2 * d; ++s) sons += rank[s] < rank[0];
    ++seen[before];
    red[before] += sons <= 2;
  } while (std::next_permutation(rank.begin(), rank.end()));
  RedProb r;
  r.given_first = Rational{red[0], seen[0]};
  r.given_second = Rational{red[1], seen[1]};
  r.total = RationalProb((r.given_first + r.given_second) * Rational{1, 2});
  return r;
}

inline void require_tree(const LatticeSpec& lattice, const char* what) {
  if (lattice.kind() != LatticeKind::tree) throw LatticeError(std::string(what) + ": requires a tree lattice");
}

/// Edge to child c is in F: at most one brother has a smaller clock.
inline bool forest_membership(const LatticeSpec& lattice, std::span<const double> clock, EdgeId e) {
  require_tree(lattice, "forest_membership");
  const VertexId child = e + 1;
  const VertexId first = lattice.first_child(lattice.parent(child));
  int earlier = 0;
  for (int b = 0; b < lattice.arity(); ++b) {
    const EdgeId f = LatticeSpec::edge_to_child(first + static_cast<VertexId>(b));
    earlier += f != e && clock[f] < clock[e];
  }
  return earlier <= 1;
}

struct RedForest {
  std::vector<std::uint8_t> in_forest;  // F
  std::vector<std::uint8_t> in_root;    // T, the component of F at the root
  std::vector<std::uint8_t> red;        // red edges of T
  std::vector<std::uint8_t> eligible;   // edges of T whose child has sons in the truncation

  std::size_t root_edges() const { return static_cast<std::size_t>(std::count(in_root.begin(), in_root.end(), 1)); }
  std::size_t eligible_edges() const {
    return static_cast<std::size_t>(std::count(eligible.begin(), eligible.end(), 1));
  }
  std::size_t eligible_red() const {
    std::size_t k = 0;
    for (std::size_t e = 0; e < red.size(); ++e) k += red[e] && eligible[e];
    return k;
  }
};

inline RedForest red_forest(const LatticeSpec& lattice, std::span<const double> clock) {
  require_tree(lattice, "red_forest");
  const std::size_t E = lattice.edge_count();
  RedForest f;
  f.in_forest.assign(E, 0);
  f.in_root.assign(E, 0);
  f.red.assign(E, 0);
  f.eligible.assign(E, 0);
  for (EdgeId e = 0; e < E; ++e) f.in_forest[e] = forest_membership(lattice, clock, e);
  // Heap layout: parents precede children, so one forward pass suffices.
  for (EdgeId e = 0; e < E; ++e) {
    const VertexId child = e + 1;
    const VertexId x = lattice.parent(child);
    const bool parent_ok = x == 0 || f.in_root[LatticeSpec::edge_to_child(x)];
    f.in_root[e] = f.in_forest[e] && parent_ok;
    if (!f.in_root[e]) continue;
    int sons = 0;
    if (!lattice.is_leaf(child)) {
      f.eligible[e] = 1;
      const VertexId first = lattice.first_child(child);
      for (int b = 0; b < lattice.arity(); ++b)
        sons += clock[LatticeSpec::edge_to_child(first + static_cast<VertexId>(b))] < clock[e];
    }
    f.red[e] = sons <= 2;
  }
  return f;
}

/// First red edge that the k = 3 schedule left closed, if any.
inline std::optional<EdgeId> red_not_open(const RedForest& f, const OpeningSchedule& schedule) {
  for (EdgeId e = 0; e < f.red.size(); ++e)
    if (f.red[e] && !schedule.is_open(e)) return e;
  return std::nullopt;
}

}  // namespace cdperc
