#pragma once

// Config parsing, experiment dispatch, CSV emission and run manifests.
//
// Configs are JSON objects with "schema_version": 1 and an "experiment" name;
// every other field is optional and falls back to the per-experiment default.
// A manifest written by run_to_directory() is itself a valid config.

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "cdperc/contour.hpp"
#include "cdperc/errors.hpp"
#include "cdperc/estimators.hpp"
#include "cdperc/peierls.hpp"
#include "cdperc/perm_oracle.hpp"
#include "cdperc/tree.hpp"

namespace cdperc {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// --- formatting -------------------------------------------------------------------

/// Fixed-precision, locale-independent.
inline std::string format_fixed(double x, int precision = 10) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, precision);
  if (res.ec != std::errc{}) throw InvariantError("format_fixed: buffer too small");
  return {buf, res.ptr};
}

template <class Int>
std::string format_int(Int v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw InvariantError("CsvTable: row width does not match header");
    rows_.push_back(std::move(row));
  }
  std::size_t rows() const noexcept { return rows_.size(); }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct ResultFile {
  std::string name;
  std::string content;
  std::size_t rows = 0;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw InvariantError("sha256: digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

// --- names ---------------------------------------------------------------------------

inline ExperimentKind parse_experiment(const std::string& s) {
  for (auto k : {ExperimentKind::simulate, ExperimentKind::theta, ExperimentKind::crossing, ExperimentKind::tc,
                 ExperimentKind::k2, ExperimentKind::uniqueness, ExperimentKind::tree, ExperimentKind::contours,
                 ExperimentKind::perm_oracle, ExperimentKind::peierls, ExperimentKind::red_prob})
    if (s == to_string(k)) return k;
  throw ConfigError("experiment", "unknown experiment '" + s + "'");
}

inline Model parse_model(const std::string& s) {
  for (auto m : {Model::constrained, Model::unrestricted, Model::diminished})
    if (s == to_string(m)) return m;
  throw ConfigError("model", "unknown model '" + s + "'");
}

inline const char* to_string(Boundary b) { return b == Boundary::free ? "free" : "periodic"; }
inline const char* to_string(Norm n) { return n == Norm::l1 ? "l1" : "linf"; }

inline Boundary parse_boundary(const std::string& s) {
  if (s == "free") return Boundary::free;
  if (s == "periodic") return Boundary::periodic;
  throw ConfigError("boundary", "unknown boundary '" + s + "'");
}

inline Norm parse_norm(const std::string& s) {
  if (s == "l1") return Norm::l1;
  if (s == "linf") return Norm::linf;
  throw ConfigError("norm", "unknown norm '" + s + "'");
}

/// Defaults that differ from the ExperimentConfig member initializers.
inline ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::simulate:
      c.sizes = {16};
      c.replicas = 4;
      c.times = {0.25, 0.5, 0.75, 1.0};
      break;
    case ExperimentKind::theta:
      c.times = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
      c.replicas = 200;
      break;
    case ExperimentKind::crossing: c.times = {0.5, 1.0}; break;
    case ExperimentKind::k2:
      c.k = 2;
      c.times = {1.0};
      c.norm = Norm::l1;
      break;
    case ExperimentKind::uniqueness: c.times = {1.0}; break;
    case ExperimentKind::tree:
      c.times = {1.0};
      c.replicas = 200;
      break;
    case ExperimentKind::peierls: c.times = {0.9, 0.95, 0.99, 0.999, 1.0}; break;
    default: break;
  }
  return c;
}

// --- JSON ------------------------------------------------------------------------

using Json = nlohmann::json;

inline Json to_json(const ExperimentConfig& c) {
  return Json{
      {"schema_version", kSchemaVersion},
      {"experiment", to_string(c.kind)},
      {"label", c.label},
      {"seed", c.seed},
      {"dimension", c.dimension},
      {"sizes", c.sizes},
      {"boundary", to_string(c.boundary)},
      {"arity", c.arity},
      {"depth", c.depth},
      {"model", to_string(c.model)},
      {"k", c.k},
      {"replicas", c.replicas},
      {"times", c.times},
      {"norm", to_string(c.norm)},
      {"confidence", c.confidence},
      {"tc_tolerance", c.tc_tolerance},
      {"tc_batch", c.tc_batch},
      {"tc_max_batches", c.tc_max_batches},
      {"n_max", c.n_max},
      {"contour_budget", c.contour_budget},
      {"k_max", c.k_max},
      {"arities", c.arities},
      {"cases", c.cases},
      {"blocker_rule", c.blocker_rule},
  };
}

namespace detail {

template <class T>
T json_field(const Json& j, const char* key, const char* expected) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(key, std::string("expected ") + expected);
  }
}

}  // namespace detail

/// Sort and deduplicate the parameter lists so output rows come out in
/// parameter order.
inline void normalize(ExperimentConfig& c) {
  auto tidy = [](auto& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  tidy(c.sizes);
  tidy(c.times);
  tidy(c.arities);
}

/// Parse a config object (or a manifest, whose "config" member is used).
inline ExperimentConfig parse_config(const Json& input) {
  const Json& j = input.is_object() && input.contains("config") && input.contains("toolkit_version")
                      ? input.at("config")
                      : input;
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  if (!j.contains("schema_version")) throw ConfigError("schema_version", "missing");
  if (detail::json_field<int>(j, "schema_version", "an integer") != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  if (!j.contains("experiment")) throw ConfigError("experiment", "missing");
  ExperimentConfig c = default_config(parse_experiment(detail::json_field<std::string>(j, "experiment", "a string")));

  static const std::set<std::string> known = {
      "schema_version", "experiment", "label", "seed", "dimension", "sizes", "boundary", "arity",
      "depth", "model", "k", "replicas", "times", "norm", "confidence", "tc_tolerance", "tc_batch",
      "tc_max_batches", "n_max", "contour_budget", "k_max", "arities", "cases", "blocker_rule", "threads"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError(key, "unknown field");

  using detail::json_field;
  if (j.contains("label")) c.label = json_field<std::string>(j, "label", "a string");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("dimension")) c.dimension = json_field<int>(j, "dimension", "an integer");
  if (j.contains("sizes")) c.sizes = json_field<std::vector<int>>(j, "sizes", "an array of integers");
  if (j.contains("boundary")) c.boundary = parse_boundary(json_field<std::string>(j, "boundary", "a string"));
  if (j.contains("arity")) c.arity = json_field<int>(j, "arity", "an integer");
  if (j.contains("depth")) c.depth = json_field<int>(j, "depth", "an integer");
  if (j.contains("model")) c.model = parse_model(json_field<std::string>(j, "model", "a string"));
  if (j.contains("k")) c.k = json_field<int>(j, "k", "an integer");
  if (j.contains("replicas")) {
    if (!j.at("replicas").is_number_unsigned()) throw ConfigError("replicas", "expected a positive integer");
    c.replicas = j.at("replicas").get<std::size_t>();
  }
  if (j.contains("times")) c.times = json_field<std::vector<double>>(j, "times", "an array of numbers");
  if (j.contains("norm")) c.norm = parse_norm(json_field<std::string>(j, "norm", "a string"));
  if (j.contains("confidence")) c.confidence = json_field<double>(j, "confidence", "a number");
  if (j.contains("tc_tolerance")) c.tc_tolerance = json_field<double>(j, "tc_tolerance", "a number");
  if (j.contains("tc_batch")) c.tc_batch = json_field<std::size_t>(j, "tc_batch", "a positive integer");
  if (j.contains("tc_max_batches"))
    c.tc_max_batches = json_field<std::size_t>(j, "tc_max_batches", "a positive integer");
  if (j.contains("n_max")) c.n_max = json_field<int>(j, "n_max", "an integer");
  if (j.contains("contour_budget")) c.contour_budget = json_field<int>(j, "contour_budget", "an integer");
  if (j.contains("k_max")) c.k_max = json_field<int>(j, "k_max", "an integer");
  if (j.contains("arities")) c.arities = json_field<std::vector<int>>(j, "arities", "an array of integers");
  if (j.contains("cases")) c.cases = json_field<std::vector<std::string>>(j, "cases", "an array of strings");
  if (j.contains("blocker_rule")) c.blocker_rule = json_field<std::string>(j, "blocker_rule", "a string");
  if (j.contains("threads")) c.threads = json_field<int>(j, "threads", "an integer");

  for (const std::string& name : c.cases) {
    try {
      parse_perm_case(name);
    } catch (const std::invalid_argument&) {
      throw ConfigError("cases", "unknown case '" + name + "'");
    }
  }
  if (c.kind == ExperimentKind::peierls)
    for (double t : c.times)
      if (!(t > 0.0)) throw ConfigError("times", "peierls needs every t in (0,1]");
  normalize(c);
  c.validate();
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config_text(read_file(path)); }

// --- experiment -> CSV ---------------------------------------------------------------

namespace detail {

inline std::string vertex_list(const Contour& c) {
  std::string out;
  for (const HalfPoint& p : c.vertices()) {
    if (!out.empty()) out += ' ';
    out += format_fixed(p.x(), 1) + ":" + format_fixed(p.y(), 1);
  }
  return out;
}

inline ResultFile finish(std::string name, const CsvTable& t) { return {std::move(name), t.str(), t.rows()}; }

}  // namespace detail

inline std::vector<ResultFile> execute(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string model = to_string(cfg.model);
  const std::string k = format_int(cfg.k);
  std::vector<ResultFile> out;
  switch (cfg.kind) {
    case ExperimentKind::simulate: {
      CsvTable runs({"model", "d", "L", "boundary", "k", "replica", "edges", "open", "blocked", "degree_excess",
                     "replay_ok", "unsaturated_blocked"});
      CsvTable times({"model", "d", "L", "k", "replica", "t", "open_edges"});
      for (int L : cfg.sizes) {
        for (const SimulationSummary& s : simulate(cfg, L)) {
          runs.add({model, format_int(cfg.dimension), format_int(L), to_string(cfg.boundary), k, format_int(s.replica),
                    format_int(s.edges), format_int(s.open), format_int(s.blocked), format_int(s.degree_excess),
                    format_bool(s.replay_ok), format_int(s.unsaturated_blocked)});
          for (std::size_t i = 0; i < cfg.times.size(); ++i)
            times.add({model, format_int(cfg.dimension), format_int(L), k, format_int(s.replica),
                       format_fixed(cfg.times[i]), format_int(s.open_at[i])});
        }
      }
      out.push_back(detail::finish("simulate.csv", runs));
      out.push_back(detail::finish("simulate_times.csv", times));
      break;
    }
    case ExperimentKind::theta:
    case ExperimentKind::crossing: {
      const bool theta = cfg.kind == ExperimentKind::theta;
      CsvTable t({"model", "d", "L", "k", "norm", "t", "estimate", "ci_lo", "ci_hi", "successes", "replicas"});
      for (int L : cfg.sizes) {
        const CurveEstimate c = theta ? estimate_theta(cfg, L) : estimate_crossing(cfg, L);
        for (const ProportionEstimate& p : c.points)
          t.add({model, format_int(cfg.dimension), format_int(L), k, theta ? to_string(cfg.norm) : "", format_fixed(p.t),
                 format_fixed(p.estimate()), format_fixed(p.ci.lo), format_fixed(p.ci.hi), format_int(p.successes),
                 format_int(p.trials)});
      }
      out.push_back(detail::finish(theta ? "theta.csv" : "crossing.csv", t));
      break;
    }
    case ExperimentKind::tc: {
      CsvTable t({"model", "L", "k", "t_lo", "t_hi", "conclusive", "steps", "replicas", "confidence"});
      for (int L : cfg.sizes) {
        const TcEstimate e = estimate_tc(cfg, L);
        t.add({model, format_int(L), k, format_fixed(e.t_lo), format_fixed(e.t_hi), format_bool(e.conclusive),
               format_int(e.steps), format_int(e.replicas), format_fixed(cfg.confidence, 4)});
      }
      out.push_back(detail::finish("tc.csv", t));
      break;
    }
    case ExperimentKind::k2: {
      CsvTable series({"model", "d", "L", "k", "norm", "t", "n", "mean_x", "half_width_x", "mean_increment",
                       "half_width_increment", "replicas"});
      CsvTable reach({"model", "d", "L", "k", "norm", "t", "estimate", "ci_lo", "ci_hi", "successes", "replicas"});
      for (int L : cfg.sizes) {
        for (double t : cfg.times) {
          const K2Decay r = k2_decay_experiment(cfg, L, t);
          for (std::size_t n = 0; n < r.x.size(); ++n) {
            const bool inc = n < r.increment.size();
            series.add({model, format_int(cfg.dimension), format_int(L), k, to_string(cfg.norm), format_fixed(t),
                        format_int(n), format_fixed(r.x[n].mean), format_fixed(r.x[n].half_width),
                        inc ? format_fixed(r.increment[n].mean) : "", inc ? format_fixed(r.increment[n].half_width) : "",
                        format_int(r.replicas)});
          }
          reach.add({model, format_int(cfg.dimension), format_int(L), k, to_string(cfg.norm), format_fixed(t),
                     format_fixed(r.reach.estimate()), format_fixed(r.reach.ci.lo), format_fixed(r.reach.ci.hi),
                     format_int(r.reach.successes), format_int(r.reach.trials)});
        }
      }
      out.push_back(detail::finish("k2.csv", series));
      out.push_back(detail::finish("k2_theta.csv", reach));
      break;
    }
    case ExperimentKind::uniqueness: {
      CsvTable t({"model", "L", "k", "t", "crossing_clusters", "replicas_with", "fraction", "replicas"});
      CsvTable s({"model", "L", "k", "t", "fraction_multiple", "replicas"});
      for (int L : cfg.sizes) {
        for (double time : cfg.times) {
          const UniquenessHistogram h = uniqueness_experiment(cfg, L, time);
          for (const auto& [clusters, n] : h.counts)
            t.add({model, format_int(L), k, format_fixed(time), format_int(clusters), format_int(n),
                   format_fixed(static_cast<double>(n) / static_cast<double>(h.replicas)), format_int(h.replicas)});
          s.add({model, format_int(L), k, format_fixed(time), format_fixed(h.fraction_multiple()),
                 format_int(h.replicas)});
        }
      }
      out.push_back(detail::finish("uniqueness.csv", t));
      out.push_back(detail::finish("uniqueness_summary.csv", s));
      break;
    }
    case ExperimentKind::tree: {
      CsvTable t({"model", "d", "h", "k", "t", "survival", "ci_lo", "ci_hi", "successes", "red_density",
                  "red_half_width", "red_exact", "red_closed", "replicas"});
      const std::string exact = red_prob(cfg.arity).total.str();
      for (double time : cfg.times) {
        const TreeSurvival r = tree_survival(cfg, time);
        t.add({model, format_int(cfg.arity), format_int(cfg.depth), k, format_fixed(time),
               format_fixed(r.survival.estimate()), format_fixed(r.survival.ci.lo), format_fixed(r.survival.ci.hi),
               format_int(r.survival.successes), format_fixed(r.red_density.mean),
               format_fixed(r.red_density.half_width), exact, format_int(r.red_closed), format_int(r.replicas)});
      }
      out.push_back(detail::finish("tree.csv", t));
      break;
    }
    case ExperimentKind::contours: {
      const ContourCensus census = enumerate_contours(cfg.n_max, cfg.threads, cfg.contour_budget);
      const CensusReport report = summarize_census(census);
      CsvTable cells({"n", "r", "m", "count", "bound", "bound_standard", "bound_holds", "anomaly_checked",
                      "anomaly_pass", "anomaly_fail"});
      for (const CensusRow& r : report.rows)
        cells.add({format_int(r.n), format_int(r.r), format_int(r.m), format_int(r.count), format_int(r.bound),
                   format_int(r.bound_standard), format_bool(r.bound_holds), format_int(r.anomaly_checked),
                   format_int(r.anomaly_pass), format_int(r.anomaly_fail)});
      CsvTable totals({"n", "count"});
      for (int n = 4; n <= cfg.n_max; n += 2) totals.add({format_int(n), format_int(census.count(n))});
      CsvTable fails({"n", "r", "m", "a_count", "u_count", "reason", "vertices"});
      for (const CensusFailure& f : report.failures)
        fails.add({format_int(f.contour.n()), format_int(f.contour.r()), format_int(f.contour.m()),
                   format_int(f.a_count), format_int(f.u_count), f.reason, detail::vertex_list(f.contour)});
      out.push_back(detail::finish("contours.csv", cells));
      out.push_back(detail::finish("contour_totals.csv", totals));
      out.push_back(detail::finish("contour_failures.csv", fails));
      break;
    }
    case ExperimentKind::perm_oracle: {
      const BlockerRule rule = cfg.blocker_rule == "any" ? BlockerRule::any : BlockerRule::every;
      CsvTable t({"case", "num", "den", "fraction", "value", "edges", "blocker_rule"});
      for (const std::string& name : cfg.cases) {
        const OrderingEvent ev = perm_event(parse_perm_case(name));
        const RationalProb p = ordering_probability(ev, rule);
        t.add({name, format_int(p.num()), format_int(p.den()), p.str(), format_fixed(p.to_double(), 12),
               format_int(ev.edges.size()), cfg.blocker_rule});
      }
      out.push_back(detail::finish("perm_oracle.csv", t));
      break;
    }
    case ExperimentKind::peierls: {
      CsvTable t({"t", "eps", "p", "alpha", "eps_bar", "eps_tilde", "beta", "delta", "summable", "tail_ratio",
                  "stirling_residual"});
      for (double time : cfg.times) {
        const PeierlsParams q = peierls_eval(time);
        t.add({format_fixed(time), format_fixed(q.eps, 12), format_fixed(q.p, 12), format_fixed(q.alpha, 12),
               format_fixed(q.eps_bar, 12), format_fixed(q.eps_tilde, 12), format_fixed(q.beta, 12),
               format_fixed(q.delta, 12), format_bool(q.summable), format_fixed(q.tail_ratio, 12),
               format_fixed(q.stirling_residual(), 16)});
      }
      CsvTable p({"k", "alpha", "scan_argmax", "r1", "closed_form", "clamped", "near_tie", "agree"});
      const double alpha = peierls_eval(1.0).alpha;
      for (const Prop1Result& r : prop1_sweep(cfg.k_max, alpha))
        p.add({format_int(r.k), format_fixed(r.alpha, 12), format_int(r.scan_argmax), format_fixed(r.r1, 12),
               format_int(r.closed_form), format_bool(r.clamped), format_bool(r.near_tie), format_bool(r.agree())});
      out.push_back(detail::finish("peierls.csv", t));
      out.push_back(detail::finish("prop1.csv", p));
      break;
    }
    case ExperimentKind::red_prob: {
      CsvTable t({"d", "given_first", "given_second", "red_prob", "oracle", "agree", "value"});
      for (int d : cfg.arities) {
        const RedProb f = red_prob(d);
        std::string oracle, agree;
        if (d <= 5) {
          const RedProb o = red_prob_oracle(d);
          oracle = o.total.str();
          agree = format_bool(o.total == f.total && o.given_first == f.given_first && o.given_second == f.given_second);
        }
        t.add({format_int(d), f.given_first.str(), f.given_second.str(), f.total.str(), oracle, agree,
               format_fixed(f.total.to_double(), 12)});
      }
      out.push_back(detail::finish("red_prob.csv", t));
      break;
    }
  }
  return out;
}

// --- manifest ----------------------------------------------------------------------

struct RunManifest {
  ExperimentConfig config;
  double duration_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> digests;  // file -> sha256

  Json to_json() const {
    Json files = Json::array();
    for (const auto& [name, digest] : digests) files.push_back({{"file", name}, {"sha256", digest}});
    return Json{{"schema_version", kSchemaVersion},
                {"toolkit_version", kToolkitVersion},
                {"seed", config.seed},
                {"config", cdperc::to_json(config)},
                {"threads", config.threads},
                {"duration_seconds", duration_seconds},
                {"results", files}};
  }
};

/// Execute, write every CSV plus manifest.json into `dir`.
inline RunManifest run_to_directory(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<ResultFile> files = execute(cfg);
  RunManifest m;
  m.config = cfg;
  m.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::filesystem::create_directories(dir);
  for (const ResultFile& f : files) {
    std::ofstream o(dir / f.name, std::ios::binary);
    o << f.content;
    if (!o) throw std::runtime_error("cannot write " + (dir / f.name).string());
    m.digests.emplace_back(f.name, sha256_hex(f.content));
  }
  std::ofstream o(dir / "manifest.json", std::ios::binary);
  o << m.to_json().dump(2) << '\n';
  if (!o) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  return m;
}

// --- exit codes -----------------------------------------------------------------------

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitInternal = 4;

/// Map the active exception to an exit code and a one-line message.
inline int exit_code_for(std::exception_ptr err, std::string& message) {
  try {
    std::rethrow_exception(err);
  } catch (const ConfigError& e) {
    message = "invalid config: " + std::string(e.what());
    return kExitConfig;
  } catch (const LatticeError& e) {
    message = "invalid config: " + std::string(e.what());
    return kExitConfig;
  } catch (const BudgetError& e) {
    message = "budget exceeded: " + std::string(e.what());
    return kExitBudget;
  } catch (const SizingError& e) {
    message = "budget exceeded: " + std::string(e.what());
    return kExitBudget;
  } catch (const std::exception& e) {
    message = "internal error: " + std::string(e.what());
    return kExitInternal;
  }
}

}  // namespace cdperc
