#include "crowd/config.hpp"

#include <ctime>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "crowd/errors.hpp"
#include "crowd/trajectory_io.hpp"

namespace crowd {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad ") + what + ": " + e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(std::string("unknown ") + what + " key '" + it.key() + "'");
}

template <class T>
void fetch(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

const std::set<std::string> kSimKeys = {
    "n_agents", "number_ratio", "density",  "intrinsic_speed", "mass",
    "relax_time", "force_strength", "radius", "cutoff", "dt",
    "sample_interval", "n_samples", "seed"};

const std::set<std::string> kObserverKeys = {"window", "epsilon", "neighbor_budget", "mu"};

void apply_sim(const json& j, SimParams& p) {
  fetch(j, "n_agents", p.n_agents);
  fetch(j, "number_ratio", p.number_ratio);
  fetch(j, "density", p.density);
  fetch(j, "intrinsic_speed", p.intrinsic_speed);
  fetch(j, "mass", p.mass);
  fetch(j, "relax_time", p.relax_time);
  fetch(j, "force_strength", p.force_strength);
  fetch(j, "radius", p.radius);
  fetch(j, "cutoff", p.cutoff);
  fetch(j, "dt", p.dt);
  fetch(j, "sample_interval", p.sample_interval);
  fetch(j, "n_samples", p.n_samples);
  fetch(j, "seed", p.seed);
}

void apply_observer(const json& j, ObserverConfig& oc) {
  fetch(j, "window", oc.window);
  fetch(j, "epsilon", oc.epsilon);
  fetch(j, "neighbor_budget", oc.neighbor_budget);
  if (j.contains("mu") && !j.at("mu").is_null()) {
    double mu = 0.0;
    fetch(j, "mu", mu);
    oc.mu = mu;
  }
}

}  // namespace

RunConfig run_config_from_json_text(const std::string& text) {
  json j = parse(text, "config");
  std::set<std::string> allowed = kSimKeys;
  allowed.insert(kObserverKeys.begin(), kObserverKeys.end());
  check_keys(j, allowed, "config");
  RunConfig c;
  apply_sim(j, c.sim);
  apply_observer(j, c.observer);
  validate(c.sim);
  if (c.observer.window < 1 || c.observer.window > c.sim.n_samples)
    throw ConfigError("window must lie in [1, n_samples]");
  if (!(c.observer.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (c.observer.neighbor_budget < 1) throw ConfigError("neighbor_budget must be at least 1");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json_text(slurp(path));
}

RunManifest manifest_from_json_text(const std::string& text) {
  json j = parse(text, "manifest");
  std::set<std::string> allowed = {"rho",         "Nr",
                                   "s0",          "runs_per_point",
                                   "base_seed",   "fit_mu",
                                   "fit_window_stride", "parallel",
                                   "n_agents",    "mass",
                                   "relax_time",  "force_strength",
                                   "radius",      "cutoff",
                                   "dt",          "sample_interval",
                                   "n_samples",   "window",
                                   "epsilon",     "neighbor_budget",
                                   "mu"};
  check_keys(j, allowed, "manifest");

  RunManifest m = default_manifest();
  fetch(j, "rho", m.rho);
  fetch(j, "Nr", m.Nr);
  fetch(j, "s0", m.s0);
  fetch(j, "runs_per_point", m.runs_per_point);
  fetch(j, "base_seed", m.base_seed);
  fetch(j, "fit_mu", m.fit_mu);
  fetch(j, "fit_window_stride", m.fit_window_stride);
  fetch(j, "parallel", m.parallel);
  apply_sim(j, m.base);
  apply_observer(j, m.observer);

  if (m.rho.empty() || m.Nr.empty() || m.s0.empty())
    throw ConfigError("manifest grid axes must be non-empty");
  if (m.runs_per_point < 1) throw ConfigError("runs_per_point must be at least 1");
  if (m.fit_window_stride < 1) throw ConfigError("fit_window_stride must be at least 1");
  for (const GridPoint& g : grid_points(m)) validate(point_params(m, g, 0));
  if (m.observer.window < 1 || m.observer.window > m.base.n_samples)
    throw ConfigError("window must lie in [1, n_samples]");
  return m;
}

RunManifest load_manifest(const std::string& path) {
  return manifest_from_json_text(slurp(path));
}

void write_sweep_manifest(const RunManifest& m, const std::string& path) {
  char stamp[32] = {0};
  std::time_t now = std::time(nullptr);
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

  json j{{"format", "sweep"},
         {"version", kToolVersion},
         {"timestamp", stamp},
         {"rho", m.rho},
         {"Nr", m.Nr},
         {"s0", m.s0},
         {"runs_per_point", m.runs_per_point},
         {"base_seed", m.base_seed},
         {"fit_mu", m.fit_mu},
         {"n_agents", m.base.n_agents},
         {"dt", m.base.dt},
         {"sample_interval", m.base.sample_interval},
         {"n_samples", m.base.n_samples},
         {"window", m.observer.window},
         {"epsilon", m.observer.epsilon}};
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace crowd
