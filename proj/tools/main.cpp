#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crowd/clusters.hpp"
#include "crowd/config.hpp"
#include "crowd/errors.hpp"
#include "crowd/metrics.hpp"
#include "crowd/observers.hpp"
#include "crowd/svg.hpp"
#include "crowd/sweep.hpp"
#include "crowd/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace crowd;

namespace {

std::string shortest(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// --out may name a csv file directly or a directory to drop default_name into
std::string resolve_out(const std::string& out, const std::string& default_name) {
  std::string path = out;
  if (!ends_with(out, ".csv") && !ends_with(out, ".svg")) {
    fs::create_directories(out);
    path = (fs::path(out) / default_name).string();
  } else if (fs::path(path).has_parent_path()) {
    fs::create_directories(fs::path(path).parent_path());
  }
  return path;
}

int cmd_simulate(const std::string& config_path, const std::string& out) {
  RunConfig cfg = load_run_config(config_path);
  std::string path = resolve_out(out, "trajectory.csv");
  Trajectory t = run_simulation(cfg.sim);
  write_trajectory_csv(t, path);
  std::cout << "wrote " << path << " (" << t.n_agents() << " agents, " << t.frames.size()
            << " frames, L=" << t.domain_edge << ", seed=" << t.params.seed << ")\n";
  return 0;
}

int cmd_sweep(const std::string& manifest_path, const std::string& out, std::optional<int> runs,
              std::optional<int> parallel) {
  RunManifest m = load_manifest(manifest_path);
  if (runs) {
    if (*runs < 1) throw ConfigError("--runs must be at least 1");
    m.runs_per_point = *runs;
  }
  if (parallel) {
    if (*parallel < 1) throw ConfigError("--parallel must be at least 1");
    m.parallel = *parallel;
  }
  std::string results_path = resolve_out(out, "results.csv");
  std::string manifest_out = ends_with(out, ".csv")
                                 ? trajectory_manifest_path(results_path)
                                 : (fs::path(out) / "sweep.manifest.json").string();

  auto records = run_sweep(m);
  write_results(records, results_path);
  write_sweep_manifest(m, manifest_out);
  std::cout << "wrote " << results_path << " (" << records.size() << " grid points, "
            << m.runs_per_point << " runs each)\n";
  return 0;
}

int cmd_classify(const std::string& traj_path, const std::string& observer,
                 const std::string& out, std::optional<int> window, std::optional<double> epsilon,
                 std::optional<double> mu_flag) {
  Trajectory t = read_trajectory_csv(traj_path);
  ObserverConfig oc;
  if (window) oc.window = *window;
  if (epsilon) oc.epsilon = *epsilon;
  if (oc.window < 1 || oc.window > static_cast<int>(t.frames.size()))
    throw ConfigError("window must lie in [1, n_samples]");
  if (!(oc.epsilon > 0.0)) throw ConfigError("epsilon must be positive");

  WindowSeries ws = window_series(t, oc);

  double mu = 0.0;
  if (observer == "neighborhood") {
    mu = mu_flag ? *mu_flag
                 : mu_scale(t.params.density, t.params.number_ratio, oc.epsilon,
                            oc.neighbor_budget);
  } else if (observer == "fitted") {
    std::vector<LabeledSample> samples;
    samples.reserve(static_cast<size_t>(ws.n_windows) * ws.n_agents);
    for (int s = 0; s < ws.n_windows; ++s)
      for (int i = 0; i < ws.n_agents; ++i)
        samples.push_back({ws.v(s, i), ws.phi(s, i), t.labels[i]});
    FitResult fit = fit_linear_classifier(samples);
    mu = fit.mu_hat;
    std::cout << "fitted mu=" << mu << " training_error=" << fit.training_error << '\n';
  }

  std::string path = resolve_out(out, "classify.csv");
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << "window_start,agent_id,true_group,v_w,phi_bar_w,pred_agent_only,pred_neighborhood\n";
  double wrong_agent = 0.0, wrong_neigh = 0.0;
  for (int s = 0; s < ws.n_windows; ++s) {
    for (int i = 0; i < ws.n_agents; ++i) {
      Group pa = classify_agent_only(ws.v(s, i));
      Group pn = classify_neighborhood(ws.v(s, i), ws.phi(s, i), mu);
      if (pa != t.labels[i]) wrong_agent += 1.0;
      if (pn != t.labels[i]) wrong_neigh += 1.0;
      os << s << ',' << i << ',' << static_cast<int>(t.labels[i]) << ',' << shortest(ws.v(s, i))
         << ',' << shortest(ws.phi(s, i)) << ',' << static_cast<int>(pa) << ','
         << static_cast<int>(pn) << '\n';
    }
  }
  if (!os) throw ConfigError("short write to " + path);
  std::cout << "wrote " << path << " (" << ws.n_windows << " windows, mu=" << mu
            << ", mean n_m agent-only=" << wrong_agent / ws.n_windows
            << " neighborhood=" << wrong_neigh / ws.n_windows << ")\n";
  return 0;
}

// report helpers: pick one value of a slice axis, tolerant of CLI rounding
bool close_to(double a, double b) { return std::abs(a - b) <= 1e-9 + 1e-6 * std::abs(b); }

std::vector<double> distinct_sorted(const std::vector<ResultRow>& rows,
                                    double ResultRow::* field) {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.*field);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string list_values(const std::vector<double>& v) {
  std::string s;
  for (double x : v) {
    if (!s.empty()) s += ", ";
    s += shortest(x);
  }
  return s;
}

void apply_filter(std::vector<ResultRow>& rows, double ResultRow::* field,
                  std::optional<double> want, const char* name) {
  if (!want) return;
  std::vector<ResultRow> keep;
  for (const auto& r : rows)
    if (close_to(r.*field, *want)) keep.push_back(r);
  if (keep.empty())
    throw ConfigError(std::string("no rows match --") + name + "=" + shortest(*want) +
                      " (available: " + list_values(distinct_sorted(rows, field)) + ")");
  rows = std::move(keep);
}

double require_unique(const std::vector<ResultRow>& rows, double ResultRow::* field,
                      const char* name) {
  auto vals = distinct_sorted(rows, field);
  if (vals.size() != 1)
    throw ConfigError(std::string("multiple ") + name + " values present, pass --" + name +
                      " (available: " + list_values(vals) + ")");
  return vals.front();
}

struct Agg {
  double sum = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    ++n;
  }
  double mean() const { return sum / n; }
};

int cmd_report(const std::string& results_path, const std::string& figure, const std::string& out,
               std::optional<double> rho, std::optional<double> nr, std::optional<double> s0) {
  auto rows = read_results(results_path);
  if (rows.empty()) throw ConfigError("empty results file " + results_path);
  apply_filter(rows, &ResultRow::rho, rho, "rho");
  apply_filter(rows, &ResultRow::Nr, nr, "nr");
  apply_filter(rows, &ResultRow::s0, s0, "s0");

  const bool vs_s0 = figure == "nm-vs-s0";
  double ResultRow::* axis = vs_s0 ? &ResultRow::s0 : &ResultRow::Nr;
  const char* axis_name = vs_s0 ? "s0" : "Nr";

  double rho_val = require_unique(rows, &ResultRow::rho, "rho");
  double held = vs_s0 ? require_unique(rows, &ResultRow::Nr, "nr")
                      : require_unique(rows, &ResultRow::s0, "s0");

  std::vector<Series> series;
  AxesSpec axes;
  axes.x_label = axis_name;
  char title[160];

  if (figure == "nm-vs-nr" || figure == "nm-vs-s0") {
    axes.y_label = "mean n_m per window";
    std::snprintf(title, sizeof(title), "misclassifications, rho=%g, %s=%g", rho_val,
                  vs_s0 ? "Nr" : "s0", held);
    // (observer, group, x) -> mean over runs
    std::map<std::string, std::map<int, std::map<double, Agg>>> acc;
    for (const auto& r : rows) acc[r.observer][r.group][r.*axis].add(r.n_m_mean);
    for (const char* obs : {"agent", "neighborhood", "fitted"}) {
      auto it = acc.find(obs);
      if (it == acc.end()) continue;
      for (auto& [grp, by_x] : it->second) {
        Series s;
        s.name = std::string(obs) + " g" + std::to_string(grp);
        for (auto& [x, a] : by_x) s.pts.push_back({x, a.mean()});
        series.push_back(std::move(s));
      }
    }
  } else if (figure == "drift") {
    axes.y_label = "drift speed";
    std::snprintf(title, sizeof(title), "drift speed, rho=%g, s0=%g", rho_val, held);
    std::map<double, Agg> acc;
    std::string obs = rows.front().observer;
    for (const auto& r : rows)
      if (r.observer == obs && r.group == 1) acc[r.Nr].add(r.drift_speed);
    Series measured{"measured", {}};
    Series law{"s0(1-2Nr)", {}};
    for (auto& [x, a] : acc) {
      measured.pts.push_back({x, a.mean()});
      law.pts.push_back({x, mixture_velocity(held, x)});
    }
    series.push_back(std::move(measured));
    series.push_back(std::move(law));
  } else {  // compare: total n_m per observer
    axes.y_label = "mean total n_m per window";
    std::snprintf(title, sizeof(title), "observer comparison, rho=%g, s0=%g", rho_val, held);
    std::map<std::string, std::map<double, Agg>> acc;
    for (const auto& r : rows) acc[r.observer][r.*axis].add(r.n_m_mean);
    for (const char* obs : {"agent", "neighborhood", "fitted"}) {
      auto it = acc.find(obs);
      if (it == acc.end()) continue;
      Series s{obs, {}};
      // group rows partition each run, so summed means give the total mean;
      // each Agg holds both group rows, n counts runs twice
      for (auto& [x, a] : it->second) s.pts.push_back({x, 2.0 * a.mean()});
      series.push_back(std::move(s));
    }
  }

  axes.title = title;
  std::string path = resolve_out(out, figure + ".svg");
  emit_plot_svg(series, axes, path);
  std::cout << "wrote " << path << " (" << series.size() << " series)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bi-disperse crowd simulator and movement-based group observers"};
  app.require_subcommand(1);

  std::string config_path, manifest_path, traj_path, results_path, out, observer, figure;
  std::optional<int> runs, parallel, window;
  std::optional<double> epsilon, mu, f_rho, f_nr, f_s0;

  auto* sim = app.add_subcommand("simulate", "run one simulation and write the trajectory");
  sim->add_option("--config", config_path, "JSON run config")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out, "output csv path or directory")->required();

  auto* sw = app.add_subcommand("sweep", "run a parameter sweep and write results");
  sw->add_option("--manifest", manifest_path, "JSON sweep manifest")
      ->required()
      ->check(CLI::ExistingFile);
  sw->add_option("--out", out, "output csv path or directory")->required();
  sw->add_option("--runs", runs, "override runs per grid point");
  sw->add_option("--parallel", parallel, "worker thread count");

  auto* cl = app.add_subcommand("classify", "window classifications for one trajectory");
  cl->add_option("--trajectory", traj_path, "trajectory csv (with manifest sidecar)")
      ->required()
      ->check(CLI::ExistingFile);
  cl->add_option("--observer", observer, "agent | neighborhood | fitted")
      ->required()
      ->check(CLI::IsMember({"agent", "neighborhood", "fitted"}));
  cl->add_option("--out", out, "output csv path or directory")->required();
  cl->add_option("--window", window, "window length in frames (default 50)");
  cl->add_option("--epsilon", epsilon, "kernel length scale (default 3)");
  cl->add_option("--mu", mu, "override the analytic observer scale");

  auto* rp = app.add_subcommand("report", "render an SVG figure from sweep results");
  rp->add_option("--results", results_path, "results csv from sweep")
      ->required()
      ->check(CLI::ExistingFile);
  rp->add_option("--figure", figure, "nm-vs-nr | nm-vs-s0 | drift | compare")
      ->required()
      ->check(CLI::IsMember({"nm-vs-nr", "nm-vs-s0", "drift", "compare"}));
  rp->add_option("--out", out, "output svg path or directory")->required();
  rp->add_option("--rho", f_rho, "slice filter");
  rp->add_option("--nr", f_nr, "slice filter");
  rp->add_option("--s0", f_s0, "slice filter");

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return cmd_simulate(config_path, out);
    if (sw->parsed()) return cmd_sweep(manifest_path, out, runs, parallel);
    if (cl->parsed()) return cmd_classify(traj_path, observer, out, window, epsilon, mu);
    return cmd_report(results_path, figure, out, f_rho, f_nr, f_s0);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << '\n';
    return 2;
  }
}
