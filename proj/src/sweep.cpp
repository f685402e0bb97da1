#include "crowd/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "crowd/clusters.hpp"
#include "crowd/errors.hpp"
#include "crowd/rng.hpp"

namespace crowd {

const char* observer_name(ObserverKind k) {
  switch (k) {
    case ObserverKind::Agent: return "agent";
    case ObserverKind::Neighborhood: return "neighborhood";
    case ObserverKind::Fitted: return "fitted";
  }
  return "?";
}

RunManifest default_manifest() {
  RunManifest m;
  m.rho = {0.57706, 0.45792, 0.3722, 0.30847, 0.25981, 0.22182};
  m.Nr = {1.0 / 42, 1.0 / 21, 2.0 / 21, 1.0 / 6,   3.0 / 14,
          2.0 / 7,  1.0 / 3,  8.0 / 21, 19.0 / 42, 0.5};
  m.s0 = {3.0, 2.0, 1.5, 1.0, 0.75, 0.5, 0.25, 0.1};
  return m;
}

std::vector<GridPoint> grid_points(const RunManifest& m) {
  std::vector<GridPoint> pts;
  pts.reserve(m.rho.size() * m.Nr.size() * m.s0.size());
  for (double rho : m.rho)
    for (double Nr : m.Nr)
      for (double s0 : m.s0) pts.push_back({rho, Nr, s0});
  return pts;
}

uint64_t derive_run_seed(uint64_t base_seed, double rho, double Nr, double s0, int run_index) {
  uint64_t h = mix64(base_seed);
  h = hash_combine(h, double_bits(rho));
  h = hash_combine(h, double_bits(Nr));
  h = hash_combine(h, double_bits(s0));
  h = hash_combine(h, static_cast<uint64_t>(run_index));
  return h;
}

SimParams point_params(const RunManifest& m, const GridPoint& g, int run_index) {
  SimParams p = m.base;
  p.density = g.rho;
  p.number_ratio = g.Nr;
  p.intrinsic_speed = g.s0;
  p.seed = derive_run_seed(m.base_seed, g.rho, g.Nr, g.s0, run_index);
  return p;
}

namespace {

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe r;
  size_t n = xs.size();
  if (n == 0) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / static_cast<double>(n);
  if (n == 1) {
    r.se = 0.0;
    return r;
  }
  double q = 0.0;
  for (double x : xs) q += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(q / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  return r;
}

template <class F>
MeanSe over_runs(const std::vector<RunOutcome>& runs, F&& f) {
  std::vector<double> xs;
  xs.reserve(runs.size());
  for (const auto& r : runs) xs.push_back(f(r));
  return mean_se(xs);
}

int gidx(Group g) { return g == Group::One ? 0 : 1; }

}  // namespace

MeanSe SweepRecord::n_m(ObserverKind k, Group g) const {
  return over_runs(runs, [&](const RunOutcome& r) { return r.n(k, g); });
}

MeanSe SweepRecord::n_m_total(ObserverKind k) const {
  return over_runs(runs,
                   [&](const RunOutcome& r) { return r.n(k, Group::One) + r.n(k, Group::Two); });
}

MeanSe SweepRecord::drift() const {
  return over_runs(runs, [](const RunOutcome& r) { return r.drift; });
}

MeanSe SweepRecord::c_in_initial(Group g) const {
  return over_runs(
      runs, [&](const RunOutcome& r) { return static_cast<double>(r.c_in_initial[gidx(g)]); });
}

MeanSe SweepRecord::c_in_final(Group g) const {
  return over_runs(
      runs, [&](const RunOutcome& r) { return static_cast<double>(r.c_in_final[gidx(g)]); });
}

namespace {

RunOutcome evaluate_with_series(const Trajectory& t, const ObserverConfig& oc,
                                const WindowSeries& ws) {
  RunOutcome out;
  out.run_seed = t.params.seed;
  out.drift = drift_speed(t);

  double mu = oc.mu ? *oc.mu
                    : mu_scale(t.params.density, t.params.number_ratio, oc.epsilon,
                               oc.neighbor_budget);
  double sum_a[2] = {0, 0}, sum_n[2] = {0, 0};
  for (int s = 0; s < ws.n_windows; ++s) {
    for (int i = 0; i < ws.n_agents; ++i) {
      int g = gidx(t.labels[i]);
      double v = ws.v(s, i);
      if (classify_agent_only(v) != t.labels[i]) sum_a[g] += 1.0;
      if (classify_neighborhood(v, ws.phi(s, i), mu) != t.labels[i]) sum_n[g] += 1.0;
    }
  }
  for (int g = 0; g < 2; ++g) {
    out.n_m[0][g] = sum_a[g] / ws.n_windows;
    out.n_m[1][g] = sum_n[g] / ws.n_windows;
  }

  auto adj0 = voronoi_adjacency(t.frames.front().pos, t.domain_edge);
  auto adj1 = voronoi_adjacency(t.frames.back().pos, t.domain_edge);
  out.c_in_initial[0] = cluster_count(adj0, t.labels, Group::One);
  out.c_in_initial[1] = cluster_count(adj0, t.labels, Group::Two);
  out.c_in_final[0] = cluster_count(adj1, t.labels, Group::One);
  out.c_in_final[1] = cluster_count(adj1, t.labels, Group::Two);
  return out;
}

struct RunWork {
  RunOutcome outcome;
  WindowSeries ws;  // retained only when a fit is requested
  std::vector<Group> labels;
  Histogram hist[2];
  bool faulted = false;
  std::string fault_text;
};

template <class F>
void parallel_for(int n_tasks, int workers, F&& fn) {
  workers = std::min(workers, n_tasks);
  if (workers <= 1) {
    for (int k = 0; k < n_tasks; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int k = next.fetch_add(1);
        if (k >= n_tasks || failed.load()) return;
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void fit_point(SweepRecord& rec, std::vector<RunWork>& works, const RunManifest& m) {
  std::vector<LabeledSample> samples;
  for (const RunWork& w : works) {
    if (w.faulted) continue;
    for (int s = 0; s < w.ws.n_windows; s += m.fit_window_stride)
      for (int i = 0; i < w.ws.n_agents; ++i)
        samples.push_back({w.ws.v(s, i), w.ws.phi(s, i), w.labels[i]});
  }
  FitResult fit = fit_linear_classifier(samples);
  rec.fitted_mu = fit.mu_hat;
  rec.fitted_training_error = fit.training_error;
  size_t out = 0;
  for (const RunWork& w : works) {
    if (w.faulted) continue;
    double sum[2] = {0, 0};
    for (int s = 0; s < w.ws.n_windows; ++s) {
      for (int i = 0; i < w.ws.n_agents; ++i) {
        Group pred = classify_neighborhood(w.ws.v(s, i), w.ws.phi(s, i), rec.fitted_mu);
        if (pred != w.labels[i]) sum[gidx(w.labels[i])] += 1.0;
      }
    }
    rec.runs[out].n_m[2][0] = sum[0] / w.ws.n_windows;
    rec.runs[out].n_m[2][1] = sum[1] / w.ws.n_windows;
    ++out;
  }
}

}  // namespace

RunOutcome evaluate_run(const Trajectory& t, const ObserverConfig& oc) {
  return evaluate_with_series(t, oc, window_series(t, oc));
}

int resolve_parallel(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CROWDOBS_PARALLEL")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<SweepRecord> run_sweep(const RunManifest& m) {
  auto pts = grid_points(m);
  int workers = resolve_parallel(m.parallel);
  int total_runs = static_cast<int>(pts.size()) * m.runs_per_point;
  int total_faults = 0;

  std::vector<SweepRecord> records(pts.size());

  for (size_t pi = 0; pi < pts.size(); ++pi) {
    SweepRecord& rec = records[pi];
    rec.point = pts[pi];
    rec.mu = m.observer.mu ? *m.observer.mu
                           : mu_scale(pts[pi].rho, pts[pi].Nr, m.observer.epsilon,
                                      m.observer.neighbor_budget);

    std::vector<RunWork> works(m.runs_per_point);
    parallel_for(m.runs_per_point, workers, [&](int r) {
      RunWork& work = works[r];
      SimParams p = point_params(m, pts[pi], r);
      try {
        Trajectory t = run_simulation(p);
        WindowSeries ws = window_series(t, m.observer);
        work.outcome = evaluate_with_series(t, m.observer, ws);
        work.labels = t.labels;
        work.hist[0] = velocity_histogram(t, Group::One);
        work.hist[1] = velocity_histogram(t, Group::Two);
        if (m.fit_mu) work.ws = std::move(ws);
      } catch (const SimulationFault& e) {
        work.faulted = true;
        work.fault_text = e.what();
        work.outcome.run_seed = p.seed;
      }
    });

    int alive = 0;
    for (int r = 0; r < m.runs_per_point; ++r) {
      if (works[r].faulted) {
        ++rec.faults;
        ++total_faults;
        std::cerr << "run fault at rho=" << pts[pi].rho << " Nr=" << pts[pi].Nr
                  << " s0=" << pts[pi].s0 << " run=" << r << ": " << works[r].fault_text << '\n';
        continue;
      }
      rec.runs.push_back(works[r].outcome);
      ++alive;
    }

    // pool the per-run velocity masses with equal weight
    for (int g = 0; g < 2; ++g) {
      bool first = true;
      for (const auto& w : works) {
        if (w.faulted) continue;
        if (first) {
          rec.hist[g] = w.hist[g];
          first = false;
        } else {
          for (size_t k = 0; k < rec.hist[g].mass.size(); ++k)
            rec.hist[g].mass[k] += w.hist[g].mass[k];
        }
      }
      if (alive > 0)
        for (double& v : rec.hist[g].mass) v /= static_cast<double>(alive);
    }

    if (m.fit_mu && alive > 0) fit_point(rec, works, m);

    std::cerr << "sweep " << (pi + 1) << "/" << pts.size() << " rho=" << pts[pi].rho
              << " Nr=" << pts[pi].Nr << " s0=" << pts[pi].s0 << " ok=" << alive
              << " fault=" << rec.faults << '\n';
  }

  if (total_faults * 20 > total_runs)
    throw SimulationFault("more than 5% of runs faulted (" + std::to_string(total_faults) + "/" +
                          std::to_string(total_runs) + ")");
  if (total_faults > 0)
    std::cerr << "excluded " << total_faults << " faulted runs of " << total_runs << '\n';
  return records;
}

namespace {

std::string shortest(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<ResultRow> rows_from_records(const std::vector<SweepRecord>& records) {
  std::vector<ResultRow> rows;
  for (const auto& rec : records) {
    for (const auto& run : rec.runs) {
      for (int k = 0; k < 3; ++k) {
        if (std::isnan(run.n_m[k][0])) continue;
        for (int g = 0; g < 2; ++g) {
          ResultRow row;
          row.rho = rec.point.rho;
          row.Nr = rec.point.Nr;
          row.s0 = rec.point.s0;
          row.run_seed = run.run_seed;
          row.observer = observer_name(static_cast<ObserverKind>(k));
          row.group = g + 1;
          row.n_m_mean = run.n_m[k][g];
          row.c_in_initial = run.c_in_initial[g];
          row.c_in_final = run.c_in_final[g];
          row.drift_speed = run.drift;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

void write_result_rows(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw ConfigError("no result rows to write");
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "rho,Nr,s0,run_seed,observer,group,n_m_mean,c_in_initial,c_in_final,drift_speed\n";
  for (const auto& r : rows) {
    out << shortest(r.rho) << ',' << shortest(r.Nr) << ',' << shortest(r.s0) << ',' << r.run_seed
        << ',' << r.observer << ',' << r.group << ',' << shortest(r.n_m_mean) << ','
        << shortest(r.c_in_initial) << ',' << shortest(r.c_in_final) << ','
        << shortest(r.drift_speed) << '\n';
  }
  if (!out) throw ConfigError("short write to " + path);
}

void write_results(const std::vector<SweepRecord>& records, const std::string& path) {
  write_result_rows(rows_from_records(records), path);
}

std::vector<ResultRow> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "rho,Nr,s0,run_seed,observer,group,n_m_mean,c_in_initial,c_in_final,drift_speed")
    throw ConfigError("unexpected results header in " + path);
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    auto next = [&]() -> std::string& {
      if (!std::getline(ss, field, ',')) throw ConfigError("bad results row: " + line);
      return field;
    };
    try {
      ResultRow r;
      r.rho = std::stod(next());
      r.Nr = std::stod(next());
      r.s0 = std::stod(next());
      r.run_seed = std::stoull(next());
      r.observer = next();
      r.group = std::stoi(next());
      r.n_m_mean = std::stod(next());
      r.c_in_initial = std::stod(next());
      r.c_in_final = std::stod(next());
      r.drift_speed = std::stod(next());
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ConfigError("bad results row: " + line);
    }
  }
  return rows;
}

}  // namespace crowd
