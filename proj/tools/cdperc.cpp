// cdperc: command-line front end.
//
//   cdperc <experiment> [--config FILE] [overrides...] [--seed N] [--out-dir DIR] [--threads N]
//   cdperc run FILE [--seed N] [--out-dir DIR] [--threads N]
//
// Exit codes: 0 ok, 2 invalid config, 3 budget exceeded, 4 internal error.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cdperc/io.hpp"

namespace {

using cdperc::Json;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = 1;
};

struct Overrides {
  std::vector<int> sizes;
  std::optional<std::size_t> replicas;
  std::vector<double> times;
  std::string model;
  std::optional<int> k;
  std::optional<int> arity;
  std::optional<int> depth;
  std::optional<int> n_max;
  std::string label;
  std::vector<std::string> set;  // key=json
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master seed (overrides the config)");
  app->add_option("--out-dir", c.out_dir, "directory for CSV results and manifest.json");
  app->add_option("--threads", c.threads, "worker threads; never changes results")->check(CLI::PositiveNumber);
}

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--sizes", o.sizes, "box / rectangle sizes L");
  app->add_option("--replicas", o.replicas, "replica count R");
  app->add_option("--times", o.times, "time grid");
  app->add_option("--model", o.model, "constrained | unrestricted | diminished");
  app->add_option("--k", o.k, "uniform degree cap");
  app->add_option("--arity", o.arity, "tree arity d");
  app->add_option("--depth", o.depth, "tree depth h");
  app->add_option("--n-max", o.n_max, "largest contour length");
  app->add_option("--label", o.label, "seed-derivation label");
  app->add_option("--set", o.set, "any config field as key=<json value>");
}

Json base_config(const std::string& experiment, const std::string& path) {
  if (path.empty()) return Json{{"schema_version", cdperc::kSchemaVersion}, {"experiment", experiment}};
  Json j;
  try {
    j = Json::parse(cdperc::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw cdperc::ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("toolkit_version")) j = j.at("config");
  if (!j.is_object()) throw cdperc::ConfigError("config", "expected a JSON object");
  if (!experiment.empty()) {
    if (j.contains("experiment") && j.at("experiment") != experiment)
      throw cdperc::ConfigError("experiment", "config names '" + j.at("experiment").dump() + "' but the subcommand is " +
                                                  experiment);
    j["experiment"] = experiment;
  }
  return j;
}

void apply_overrides(Json& j, const Overrides& o) {
  if (!o.sizes.empty()) j["sizes"] = o.sizes;
  if (o.replicas) j["replicas"] = *o.replicas;
  if (!o.times.empty()) j["times"] = o.times;
  if (!o.model.empty()) j["model"] = o.model;
  if (o.k) j["k"] = *o.k;
  if (o.arity) j["arity"] = *o.arity;
  if (o.depth) j["depth"] = *o.depth;
  if (o.n_max) j["n_max"] = *o.n_max;
  if (!o.label.empty()) j["label"] = o.label;
  for (const std::string& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw cdperc::ConfigError("--set", "expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    try {
      j[key] = Json::parse(value);
    } catch (const nlohmann::json::parse_error&) {
      j[key] = value;  // bare strings
    }
  }
}

int execute(Json j, const Common& c, const std::string& fallback_dir) {
  if (c.seed) j["seed"] = *c.seed;
  cdperc::ExperimentConfig cfg = cdperc::parse_config(j);
  cfg.threads = c.threads;
  const std::string dir = c.out_dir.empty() ? fallback_dir + "/" + cdperc::to_string(cfg.kind) : c.out_dir;
  const cdperc::RunManifest m = cdperc::run_to_directory(cfg, dir);
  for (const auto& [name, digest] : m.digests) std::cout << dir << "/" << name << "  " << digest << "\n";
  std::cout << dir << "/manifest.json\n";
  return cdperc::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained-degree percolation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cdperc::kToolkitVersion);

  static const char* kExperiments[] = {"simulate", "theta", "crossing", "tc", "k2", "uniqueness",
                                       "tree", "contours", "perm-oracle", "peierls", "red-prob"};
  std::map<std::string, std::pair<Common, Overrides>> opts;
  for (const char* name : kExperiments) {
    auto& [common, over] = opts[name];
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", common.config_path, "JSON config or manifest")->check(CLI::ExistingFile);
    add_common(sub, common);
    add_overrides(sub, over);
  }
  Common run_opts;
  CLI::App* run = app.add_subcommand("run", "run the experiment named in a config or manifest");
  run->add_option("config", run_opts.config_path, "JSON config or manifest")->required()->check(CLI::ExistingFile);
  add_common(run, run_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cdperc::kExitConfig;
  }

  try {
    if (run->parsed()) return execute(base_config("", run_opts.config_path), run_opts, "results");
    for (auto& [name, o] : opts) {
      if (!app.got_subcommand(name)) continue;
      Json j = base_config(name, o.first.config_path);
      apply_overrides(j, o.second);
      return execute(std::move(j), o.first, "results");
    }
  } catch (...) {
    std::string message;
    const int code = cdperc::exit_code_for(std::current_exception(), message);
    std::cerr << "cdperc: " << message << "\n";
    return code;
  }
  return cdperc::kExitInternal;
}
