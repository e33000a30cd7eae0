#pragma once

// Exact probabilities of joint "late clock" events among a handful of primal
// edges, by listing every ordering of their clocks. For i.i.d. continuous
// clocks only the ordering matters, so the count of favourable orderings over
// n! is the probability.
//
// The configurations are written down geometrically: a contour edge e* (a
// dual segment), its primal partner e, and blocker sets X(e*) given as
// translates of e and e*. Segments are identified by midpoint and direction,
// so translating a dual segment by a half-integer vector lands on a primal one
// exactly as in the planar picture.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdperc/errors.hpp"
#include "cdperc/rational.hpp"

namespace cdperc {

/// Unit segment in the plane: doubled midpoint plus direction.
struct Segment {
  int twice_mx = 0;
  int twice_my = 0;
  bool vertical = false;

  /// Translate by (dx/2, dy/2).
  Segment shifted_half(int dx, int dy) const { return {twice_mx + dx, twice_my + dy, vertical}; }
  /// The segment of the other lattice crossing this one at its midpoint.
  Segment partner() const { return {twice_mx, twice_my, !vertical}; }
  /// Primal segments have midpoints (k + 1/2, j) when horizontal and
  /// (k, j + 1/2) when vertical.
  bool is_primal() const noexcept {
    const bool odd_x = (twice_mx & 1) != 0, odd_y = (twice_my & 1) != 0;
    if (odd_x == odd_y) return false;
    return vertical ? odd_y : odd_x;
  }
  bool is_dual() const noexcept {
    const bool odd_x = (twice_mx & 1) != 0, odd_y = (twice_my & 1) != 0;
    if (odd_x == odd_y) return false;
    return vertical ? odd_x : odd_y;
  }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// The clock of `edge` must exceed the clocks of its blockers.
struct LateCondition {
  std::size_t edge = 0;
  std::vector<std::size_t> blockers;
};

/// Which blockers must ring first: all of them (U > max) or at least one (U > min).
enum class BlockerRule { every, any };

struct OrderingEvent {
  std::string name;
  std::vector<Segment> edges;  // distinct primal segments, clock index = position
  std::vector<LateCondition> conditions;
};

/// Count favourable orderings over all n! orderings of the event's clocks.
inline RationalProb ordering_probability(const OrderingEvent& event, BlockerRule rule = BlockerRule::every,
                                         std::size_t max_edges = 11) {
  const std::size_t n = event.edges.size();
  if (n > max_edges) throw BudgetError("ordering_probability: " + std::to_string(n) + " clocks exceeds the budget");
  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::uint64_t favourable = 0, total = 0;
  do {
    ++total;
    bool ok = true;
    for (const LateCondition& c : event.conditions) {
      bool late;
      if (rule == BlockerRule::every) {
        late = std::all_of(c.blockers.begin(), c.blockers.end(), [&](std::size_t b) { return rank[c.edge] > rank[b]; });
      } else {
        late = std::any_of(c.blockers.begin(), c.blockers.end(), [&](std::size_t b) { return rank[c.edge] > rank[b]; });
      }
      if (!late) {
        ok = false;
        break;
      }
    }
    favourable += ok;
  } while (std::next_permutation(rank.begin(), rank.end()));
  return RationalProb(favourable, total);
}

enum class PermCase { shared_frontal, case_one, case_two };

inline std::string_view to_string(PermCase c) {
  switch (c) {
    case PermCase::shared_frontal: return "shared-frontal";
    case PermCase::case_one: return "case-I";
    case PermCase::case_two: return "case-II";
  }
  return "?";
}

inline PermCase parse_perm_case(std::string_view s) {
  if (s == "shared-frontal") return PermCase::shared_frontal;
  if (s == "case-I") return PermCase::case_one;
  if (s == "case-II") return PermCase::case_two;
  throw std::invalid_argument("unknown perm-oracle case: " + std::string(s));
}

namespace detail {

/// Blocker set of one contour edge, split by direction: frontal blockers are
/// parallel to the primal partner, lateral ones to the contour edge itself.
struct BlockerSet {
  Segment contour_edge;  // dual
  std::vector<Segment> members;

  Segment primal() const { return contour_edge.partner(); }
  std::vector<Segment> lateral() const {
    std::vector<Segment> out;
    for (const Segment& s : members)
      if (s.vertical == contour_edge.vertical) out.push_back(s);
    return out;
  }
  std::size_t frontal_count() const {
    return static_cast<std::size_t>(std::count_if(members.begin(), members.end(), [&](const Segment& s) {
      return s.vertical != contour_edge.vertical;
    }));
  }
};

class EventBuilder {
 public:
  explicit EventBuilder(std::string name) { event_.name = std::move(name); }

  void require(const Segment& edge, const std::vector<Segment>& blockers) {
    LateCondition c;
    c.edge = index_of(edge);
    for (const Segment& b : blockers) c.blockers.push_back(index_of(b));
    event_.conditions.push_back(std::move(c));
  }
  OrderingEvent take() { return std::move(event_); }

 private:
  std::size_t index_of(const Segment& s) {
    if (!s.is_primal()) throw InvariantError("perm_oracle: blocker is not a primal segment");
    for (std::size_t i = 0; i < event_.edges.size(); ++i)
      if (event_.edges[i] == s) return i;
    event_.edges.push_back(s);
    return event_.edges.size() - 1;
  }
  OrderingEvent event_;
};

}  // namespace detail

/// The geometric configuration behind each case, with e* the vertical dual
/// segment through (1/2, 0) and e its horizontal primal partner.
inline OrderingEvent perm_event(PermCase which) {
  using detail::BlockerSet;
  const Segment e_star{1, 0, true};
  const Segment e = e_star.partner();
  // Translations by integer vectors are written doubled.
  auto tr = [](const Segment& s, int dx2, int dy2) { return s.shifted_half(dx2, dy2); };

  auto check = [](const BlockerSet& x) {
    if (!x.contour_edge.is_dual()) throw InvariantError("perm_oracle: contour edge is not dual");
    if (x.frontal_count() != 1) throw InvariantError("perm_oracle: blocker set needs exactly one frontal bond");
  };

  switch (which) {
    case PermCase::shared_frontal: {
      // f* = e* + (2,0); both sets share the frontal bond e + (1,0).
      const Segment f_star = tr(e_star, 4, 0);
      BlockerSet xe{e_star, {tr(e, 2, 0), tr(e_star, 1, -1)}};
      BlockerSet xf{f_star, {tr(e, 2, 0), tr(e_star, 3, -1)}};
      check(xe);
      check(xf);
      detail::EventBuilder b("shared-frontal");
      b.require(xe.primal(), xe.members);
      b.require(xf.primal(), xf.members);
      return b.take();
    }
    case PermCase::case_one: {
      const Segment f_star = tr(e_star, 2, -2);  // e* + (1,-1)
      const Segment g_star = tr(e, 3, -1);       // e + (3/2,-1/2)
      const Segment h_star = tr(e, -1, -1);      // e + (-1/2,-1/2)
      BlockerSet xe{e_star, {tr(e, 2, 0), tr(e_star, 1, -1)}};
      BlockerSet xf{f_star, {tr(e, 0, -2), tr(e_star, 1, -1), tr(e_star, 1, -3)}};
      BlockerSet xg{g_star, {tr(e_star, 3, 1), tr(e, 2, 0)}};
      BlockerSet xh{h_star, {tr(e_star, -1, -3), tr(e, 0, -2), tr(e, -2, -2)}};
      for (const auto* x : {&xe, &xf, &xg, &xh}) check(*x);
      detail::EventBuilder b("case-I");
      b.require(xe.primal(), xe.members);
      b.require(xf.primal(), xf.members);
      // g* and h* keep only their lateral blockers
      b.require(xg.primal(), xg.lateral());
      b.require(xh.primal(), xh.lateral());
      return b.take();
    }
    case PermCase::case_two: {
      const Segment f_star = tr(e_star, 2, 2);  // e* + (1,1)
      const Segment g_star = tr(e, 3, 1);       // e + (3/2,1/2)
      const Segment h_star = tr(e, -1, 1);      // e + (-1/2,1/2)
      BlockerSet xe{e_star, {tr(e, 2, 0), tr(e_star, 1, -1), tr(e_star, 1, 1)}};
      BlockerSet xf{f_star, {tr(e, 0, 2), tr(e_star, 1, 1)}};
      BlockerSet xg{g_star, {tr(e_star, 3, -1), tr(e, 2, 0)}};
      BlockerSet xh{h_star, {tr(e_star, -1, 3), tr(e, 0, 2), tr(e, -2, 2)}};
      for (const auto* x : {&xe, &xf, &xg, &xh}) check(*x);
      detail::EventBuilder b("case-II");
      b.require(xe.primal(), xe.members);
      b.require(xf.primal(), xf.members);
      b.require(xg.primal(), xg.lateral());
      b.require(xh.primal(), xh.lateral());
      return b.take();
    }
  }
  throw std::invalid_argument("perm_event: unknown case");
}

/// Probability that every listed edge rings after all of its blockers.
inline RationalProb perm_oracle(PermCase which, BlockerRule rule = BlockerRule::every) {
  return ordering_probability(perm_event(which), rule);
}

}  // namespace cdperc
