#pragma once

// Monte Carlo drivers. Replica r of an experiment uses the clock stream
// stream_key(child_seed(master, label, size), r); replicas run in parallel and
// are reduced in index order, so results never depend on the thread count.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdperc/cluster.hpp"
#include "cdperc/contour.hpp"
#include "cdperc/dynamics.hpp"
#include "cdperc/errors.hpp"
#include "cdperc/lattice.hpp"
#include "cdperc/rng.hpp"
#include "cdperc/stats.hpp"
#include "cdperc/tree.hpp"

namespace cdperc {

enum class ExperimentKind { simulate, theta, crossing, tc, k2, uniqueness, tree, contours, perm_oracle, peierls, red_prob };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::simulate: return "simulate";
    case ExperimentKind::theta: return "theta";
    case ExperimentKind::crossing: return "crossing";
    case ExperimentKind::tc: return "tc";
    case ExperimentKind::k2: return "k2";
    case ExperimentKind::uniqueness: return "uniqueness";
    case ExperimentKind::tree: return "tree";
    case ExperimentKind::contours: return "contours";
    case ExperimentKind::perm_oracle: return "perm-oracle";
    case ExperimentKind::peierls: return "peierls";
    case ExperimentKind::red_prob: return "red-prob";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::crossing;
  std::string label;  // seed-derivation label; defaults to the kind name
  std::uint64_t seed = 1;

  // lattice
  int dimension = 2;
  std::vector<int> sizes{64};  // L for boxes and rectangles
  Boundary boundary = Boundary::free;
  int arity = 3;   // trees
  int depth = 12;  // trees

  // dynamics
  Model model = Model::constrained;
  int k = 3;

  // sampling
  std::size_t replicas = 1000;
  std::vector<double> times{0.5};
  Norm norm = Norm::linf;
  double confidence = 0.95;

  // critical-time bracketing
  double tc_tolerance = 0.01;
  std::size_t tc_batch = 1000;
  std::size_t tc_max_batches = 8;

  // exact modules
  int n_max = 14;
  int contour_budget = kDefaultContourBudget;
  int k_max = 200;
  std::vector<int> arities{2, 3, 4, 5};
  std::vector<std::string> cases{"shared-frontal", "case-I", "case-II"};
  std::string blocker_rule = "every";  // "every": U > max X, "any": U > min X

  // execution only; never affects results
  int threads = 1;

  std::string seed_label() const { return label.empty() ? std::string(to_string(kind)) : label; }

  void validate() const {
    if (replicas < 1) throw ConfigError("replicas", "must be >= 1");
    if (dimension < 1) throw ConfigError("dimension", "must be >= 1");
    if (sizes.empty()) throw ConfigError("sizes", "must list at least one size");
    for (int L : sizes)
      if (L < 1) throw ConfigError("sizes", "every size must be >= 1");
    if (arity < 2) throw ConfigError("arity", "must be >= 2");
    if (depth < 1) throw ConfigError("depth", "must be >= 1");
    if (k < 1) throw ConfigError("k", "must be >= 1");
    for (double t : times)
      if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("times", "every time must lie in [0,1]");
    if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence", "must lie in (0,1)");
    if (!(tc_tolerance > 0.0)) throw ConfigError("tc_tolerance", "must be positive");
    if (tc_batch < 1) throw ConfigError("tc_batch", "must be >= 1");
    if (tc_max_batches < 1) throw ConfigError("tc_max_batches", "must be >= 1");
    if (n_max < 4 || n_max % 2 != 0) throw ConfigError("n_max", "must be an even integer >= 4");
    if (k_max < 2) throw ConfigError("k_max", "must be >= 2");
    for (int d : arities)
      if (d < 2) throw ConfigError("arities", "every arity must be >= 2");
    if (blocker_rule != "every" && blocker_rule != "any") throw ConfigError("blocker_rule", "must be every or any");
    if (threads < 1) throw ConfigError("threads", "must be >= 1");
  }
};

/// Seed for one (experiment, size) cell.
inline std::uint64_t child_seed(std::uint64_t master, const std::string& label, long long size) {
  return experiment_seed(master, label + "/" + std::to_string(size));
}

inline OpeningSchedule run_model(Model model, const LatticeSpec& lattice, const ClockAssignment& clocks,
                                 const ConstraintSpec& constraint) {
  switch (model) {
    case Model::constrained: return run_constrained(lattice, clocks, constraint);
    case Model::unrestricted: return run_unrestricted(lattice, clocks);
    case Model::diminished: return run_diminished(lattice, clocks);
  }
  throw std::invalid_argument("run_model: unknown model");
}

/// Point estimate of a proportion with its Wilson interval.
struct ProportionEstimate {
  double t = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  Interval ci;
  double estimate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }
};

struct CurveEstimate {
  int size = 0;
  std::size_t replicas = 0;
  std::vector<ProportionEstimate> points;
};

/// Empirical CDF of first-connection times, evaluated on a grid.
inline CurveEstimate curve_from_times(int size, const std::vector<ConnectionTime>& hits, const std::vector<double>& grid,
                                      double z) {
  CurveEstimate c;
  c.size = size;
  c.replicas = hits.size();
  for (double t : grid) {
    ProportionEstimate p;
    p.t = t;
    p.trials = hits.size();
    for (const ConnectionTime& h : hits) p.successes += h.connected_at(t);
    p.ci = wilson_interval(p.successes, p.trials, z);
    c.points.push_back(p);
  }
  return c;
}

namespace detail {

template <class Fn>
std::vector<ConnectionTime> replica_times(std::size_t first, std::size_t count, int threads, Fn&& fn) {
  std::vector<ConnectionTime> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = fn(first + i); });
  return out;
}

inline void require_box_model(const ExperimentConfig& cfg) {
  if (cfg.model == Model::diminished && (cfg.dimension != 2 || cfg.boundary != Boundary::free))
    throw ConfigError("model", "diminished model needs a free planar box");
}

}  // namespace detail

// --- theta ------------------------------------------------------------------

/// theta_L(t): the origin reaches the shell ||v|| = L of the box [-L, L]^d.
inline CurveEstimate estimate_theta(const ExperimentConfig& cfg, int L) {
  detail::require_box_model(cfg);
  if (cfg.boundary != Boundary::free) throw ConfigError("boundary", "theta needs a free box");
  const LatticeSpec lattice = build_box_lattice(cfg.dimension, L, Boundary::free);
  const ConstraintSpec caps = ConstraintSpec::uniform(lattice, cfg.k);
  const VertexId origin = *lattice.origin();
  const std::vector<VertexId> shell = lattice.shell(L, cfg.norm);
  const std::uint64_t seed = child_seed(cfg.seed, cfg.seed_label(), L);
  auto hits = detail::replica_times(0, cfg.replicas, cfg.threads, [&](std::size_t r) {
    const ClockAssignment clocks = sample_clocks(lattice, seed, r);
    return connection_time(lattice, run_model(cfg.model, lattice, clocks, caps), origin, shell);
  });
  return curve_from_times(L, hits, cfg.times, z_for_confidence(cfg.confidence));
}

// --- crossing -------------------------------------------------------------------

/// Left-right crossing of the (L+1) x L rectangle.
inline std::vector<ConnectionTime> crossing_times(const ExperimentConfig& cfg, int L, std::size_t first,
                                                  std::size_t count) {
  if (cfg.dimension != 2) throw ConfigError("dimension", "crossing experiments are planar");
  const LatticeSpec lattice = build_crossing_rectangle(L);
  const ConstraintSpec caps = ConstraintSpec::uniform(lattice, cfg.k);
  const std::uint64_t seed = child_seed(cfg.seed, cfg.seed_label(), L);
  return detail::replica_times(first, count, cfg.threads, [&](std::size_t r) {
    const ClockAssignment clocks = sample_clocks(lattice, seed, r);
    return crossing_time(lattice, run_model(cfg.model, lattice, clocks, caps), 0);
  });
}

inline CurveEstimate estimate_crossing(const ExperimentConfig& cfg, int L) {
  return curve_from_times(L, crossing_times(cfg, L, 0, cfg.replicas), cfg.times, z_for_confidence(cfg.confidence));
}

// --- critical time bracket -----------------------------------------------------

struct TcEstimate {
  int size = 0;
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::size_t replicas = 0;
  bool conclusive = false;  // false: budget ran out before the tolerance was met
  int steps = 0;
};

/// Bisection on t for the point where the crossing probability passes 1/2.
/// Every replica's crossing time is known, so each batch of replicas serves
/// every midpoint; a midpoint is decided once its Wilson interval excludes
/// 1/2, and further batches are drawn while it does not. If a midpoint stays
/// undecided with the budget spent, both ends are pulled in towards it as far
/// as the data allow, and the bracket is flagged inconclusive when it is still
/// wider than the tolerance.
inline TcEstimate estimate_tc(const ExperimentConfig& cfg, int L) {
  const double z = z_for_confidence(cfg.confidence);
  std::vector<ConnectionTime> hits;
  std::size_t batches = 0;
  auto add_batch = [&] {
    auto more = crossing_times(cfg, L, hits.size(), cfg.tc_batch);
    hits.insert(hits.end(), more.begin(), more.end());
    ++batches;
  };
  // -1: below 1/2, +1: above, 0: undecided with the budget spent
  auto side = [&](double t) {
    for (;;) {
      std::size_t s = 0;
      for (const ConnectionTime& h : hits) s += h.connected_at(t);
      const Interval ci = wilson_interval(s, hits.size(), z);
      if (ci.hi < 0.5) return -1;
      if (ci.lo > 0.5) return 1;
      if (batches >= cfg.tc_max_batches) return 0;
      add_batch();
    }
  };
  add_batch();

  TcEstimate est;
  est.size = L;
  const double tol = cfg.tc_tolerance;
  if (side(1.0) > 0) {
    double stuck = -1.0;
    while (est.t_hi - est.t_lo > tol) {
      const double mid = 0.5 * (est.t_lo + est.t_hi);
      const int s = side(mid);
      ++est.steps;
      if (s < 0) {
        est.t_lo = mid;
      } else if (s > 0) {
        est.t_hi = mid;
      } else {
        stuck = mid;
        break;
      }
    }
    if (stuck >= 0.0) {
      for (double a = est.t_lo, b = stuck; b - a > tol;) {
        const double c = 0.5 * (a + b);
        ++est.steps;
        (side(c) < 0 ? a : b) = c;
        est.t_lo = a;
      }
      for (double a = stuck, b = est.t_hi; b - a > tol;) {
        const double c = 0.5 * (a + b);
        ++est.steps;
        (side(c) > 0 ? b : a) = c;
        est.t_hi = b;
      }
    }
  }
  est.conclusive = est.t_hi - est.t_lo <= tol;
  est.replicas = hits.size();
  return est;
}

// --- k = 2 decay -------------------------------------------------------------------

struct K2Decay {
  int size = 0;
  double t = 1.0;
  Norm norm = Norm::linf;
  std::size_t replicas = 0;
  std::vector<MeanEstimate> x;          // X_n, n = 0..L
  std::vector<MeanEstimate> increment;  // X_{n+1} - X_n, n = 0..L-1
  ProportionEstimate reach;             // X_L > 0, i.e. theta_L(t)
};

inline K2Decay k2_decay_experiment(const ExperimentConfig& cfg, int L, double t) {
  if (cfg.boundary != Boundary::free) throw ConfigError("boundary", "k2 needs a free box");
  detail::require_box_model(cfg);
  const LatticeSpec lattice = build_box_lattice(cfg.dimension, L, Boundary::free);
  const ConstraintSpec caps = ConstraintSpec::uniform(lattice, cfg.k);
  const std::uint64_t seed = child_seed(cfg.seed, cfg.seed_label(), L);
  std::vector<std::vector<std::int64_t>> series(cfg.replicas);
  parallel_for(cfg.replicas, cfg.threads, [&](std::size_t r) {
    const ClockAssignment clocks = sample_clocks(lattice, seed, r);
    series[r] = boundary_counts(lattice, run_model(cfg.model, lattice, clocks, caps), t, cfg.norm).counts;
  });

  const double z = z_for_confidence(cfg.confidence);
  K2Decay out;
  out.size = L;
  out.t = t;
  out.norm = cfg.norm;
  out.replicas = cfg.replicas;
  const std::size_t levels = series.front().size();
  std::vector<double> col(cfg.replicas);
  for (std::size_t n = 0; n < levels; ++n) {
    for (std::size_t r = 0; r < cfg.replicas; ++r) col[r] = static_cast<double>(series[r][n]);
    out.x.push_back(mean_with_ci(col, z));
    if (n + 1 < levels) {
      for (std::size_t r = 0; r < cfg.replicas; ++r) col[r] = static_cast<double>(series[r][n + 1] - series[r][n]);
      out.increment.push_back(mean_with_ci(col, z));
    }
  }
  out.reach.t = t;
  out.reach.trials = cfg.replicas;
  for (const auto& s : series) out.reach.successes += s.back() > 0;
  out.reach.ci = wilson_interval(out.reach.successes, out.reach.trials, z);
  return out;
}

// --- uniqueness surrogate -------------------------------------------------------------

struct UniquenessHistogram {
  int size = 0;
  double t = 0.0;
  std::size_t replicas = 0;
  std::map<std::size_t, std::size_t> counts;  // crossing clusters -> replicas

  std::size_t at_least(std::size_t c) const {
    std::size_t total = 0;
    for (const auto& [k, v] : counts)
      if (k >= c) total += v;
    return total;
  }
  double fraction_multiple() const {
    return replicas == 0 ? 0.0 : static_cast<double>(at_least(2)) / static_cast<double>(replicas);
  }
};

/// Distinct left-right crossing clusters of the (L+1) x L rectangle at time t.
inline UniquenessHistogram uniqueness_experiment(const ExperimentConfig& cfg, int L, double t) {
  if (cfg.dimension != 2) throw ConfigError("dimension", "uniqueness experiments are planar");
  const LatticeSpec lattice = build_crossing_rectangle(L);
  const ConstraintSpec caps = ConstraintSpec::uniform(lattice, cfg.k);
  const std::uint64_t seed = child_seed(cfg.seed, cfg.seed_label(), L);
  std::vector<std::size_t> found(cfg.replicas);
  parallel_for(cfg.replicas, cfg.threads, [&](std::size_t r) {
    const ClockAssignment clocks = sample_clocks(lattice, seed, r);
    found[r] = count_crossing_clusters(config_at(run_model(cfg.model, lattice, clocks, caps), t), lattice, 0);
  });
  UniquenessHistogram h;
  h.size = L;
  h.t = t;
  h.replicas = cfg.replicas;
  for (std::size_t c : found) ++h.counts[c];
  return h;
}

// --- trees ------------------------------------------------------------------------

struct TreeSurvival {
  int arity = 0;
  int depth = 0;
  double t = 0.0;
  std::size_t replicas = 0;
  ProportionEstimate survival;  // root joined to generation h by time t
  MeanEstimate red_density;     // red / eligible edges of the root component, ratio over replicas
  std::size_t red_closed = 0;   // red edges the k = 3 schedule left closed
};

inline TreeSurvival tree_survival(const ExperimentConfig& cfg, double t) {
  const LatticeSpec lattice = build_tree(cfg.arity, cfg.depth);
  const ConstraintSpec caps = ConstraintSpec::uniform(lattice, cfg.k);
  const std::uint64_t seed = child_seed(cfg.seed, cfg.seed_label(), cfg.depth);
  std::vector<VertexId> deepest;
  for (VertexId v = lattice.level_begin(cfg.depth); v < lattice.vertex_count(); ++v) deepest.push_back(v);

  if (cfg.model == Model::diminished) throw ConfigError("model", "diminished model is planar only");
  const bool check_red = cfg.model == Model::constrained && cfg.k == 3;
  std::vector<ConnectionTime> hits(cfg.replicas);
  std::vector<double> red(cfg.replicas), eligible(cfg.replicas);
  std::vector<std::size_t> closed(cfg.replicas, 0);
  parallel_for(cfg.replicas, cfg.threads, [&](std::size_t r) {
    const ClockAssignment clocks = sample_clocks(lattice, seed, r);
    const OpeningSchedule schedule = run_model(cfg.model, lattice, clocks, caps);
    hits[r] = connection_time(lattice, schedule, 0, deepest);
    const RedForest forest = red_forest(lattice, clocks.values());
    red[r] = static_cast<double>(forest.eligible_red());
    eligible[r] = static_cast<double>(forest.eligible_edges());
    if (check_red)
      for (EdgeId e = 0; e < forest.red.size(); ++e) closed[r] += forest.red[e] && !schedule.is_open(e);
  });

  const double z = z_for_confidence(cfg.confidence);
  TreeSurvival out;
  out.arity = cfg.arity;
  out.depth = cfg.depth;
  out.t = t;
  out.replicas = cfg.replicas;
  out.survival.t = t;
  out.survival.trials = cfg.replicas;
  for (const ConnectionTime& h : hits) out.survival.successes += h.connected_at(t);
  out.survival.ci = wilson_interval(out.survival.successes, out.survival.trials, z);
  out.red_density = ratio_with_ci(red, eligible, z);
  for (std::size_t c : closed) out.red_closed += c;
  return out;
}

// --- plain simulation ---------------------------------------------------------------

struct SimulationSummary {
  std::size_t replica = 0;
  std::size_t edges = 0;
  std::size_t open = 0;
  std::size_t blocked = 0;
  std::uint32_t degree_excess = 0;
  bool replay_ok = true;
  std::size_t unsaturated_blocked = 0;
  std::vector<std::size_t> open_at;  // open edges at each configured time
};

inline std::vector<SimulationSummary> simulate(const ExperimentConfig& cfg, int L) {
  detail::require_box_model(cfg);
  const LatticeSpec lattice = build_box_lattice(cfg.dimension, L, cfg.boundary);
  const ConstraintSpec caps = ConstraintSpec::uniform(lattice, cfg.k);
  const std::uint64_t seed = child_seed(cfg.seed, cfg.seed_label(), L);
  std::vector<SimulationSummary> out(cfg.replicas);
  parallel_for(cfg.replicas, cfg.threads, [&](std::size_t r) {
    const ClockAssignment clocks = sample_clocks(lattice, seed, r);
    const OpeningSchedule s = run_model(cfg.model, lattice, clocks, caps);
    SimulationSummary& row = out[r];
    row.replica = r;
    row.edges = s.size();
    row.blocked = s.blocked_count();
    row.open = row.edges - row.blocked;
    if (cfg.model == Model::constrained) {
      row.degree_excess = max_final_degree_excess(lattice, caps, s);
      row.replay_ok = !replay_mismatch(lattice, caps, s).has_value();
      row.unsaturated_blocked = unsaturated_blocked(lattice, caps, s);
    }
    for (double t : cfg.times) row.open_at.push_back(config_at(s, t).open_count());
  });
  return out;
}

}  // namespace cdperc
