#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "crowd/metrics.hpp"
#include "crowd/observers.hpp"
#include "crowd/params.hpp"

namespace crowd {

enum class ObserverKind { Agent = 0, Neighborhood = 1, Fitted = 2 };

const char* observer_name(ObserverKind k);

struct GridPoint {
  double rho = 0.0;
  double Nr = 0.0;
  double s0 = 0.0;
};

struct RunManifest {
  std::vector<double> rho;  // axis order rho, Nr, s0; rows come out grid-lexicographic
  std::vector<double> Nr;
  std::vector<double> s0;
  int runs_per_point = 20;
  uint64_t base_seed = 1;
  SimParams base;           // density/number_ratio/intrinsic_speed/seed overridden per run
  ObserverConfig observer;
  bool fit_mu = false;
  int fit_window_stride = 5;  // windows pooled into the fit
  int parallel = 0;           // 0: CROWDOBS_PARALLEL or hardware concurrency
};

// the standard sweep grids
RunManifest default_manifest();

std::vector<GridPoint> grid_points(const RunManifest& m);

uint64_t derive_run_seed(uint64_t base_seed, double rho, double Nr, double s0, int run_index);

SimParams point_params(const RunManifest& m, const GridPoint& g, int run_index);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct RunOutcome {
  uint64_t run_seed = 0;
  double n_m[3][2] = {{kMissing, kMissing}, {kMissing, kMissing}, {kMissing, kMissing}};
  int c_in_initial[2] = {0, 0};
  int c_in_final[2] = {0, 0};
  double drift = 0.0;

  double n(ObserverKind k, Group g) const {
    return n_m[static_cast<int>(k)][g == Group::One ? 0 : 1];
  }
};

struct MeanSe {
  double mean = kMissing;
  double se = kMissing;  // sample standard deviation over sqrt(count)
};

struct SweepRecord {
  GridPoint point;
  std::vector<RunOutcome> runs;  // faulted runs excluded
  int faults = 0;
  double mu = kMissing;  // analytic observer scale at this point
  double fitted_mu = kMissing;
  double fitted_training_error = kMissing;
  Histogram hist[2];  // per-group v_x mass, averaged over runs

  MeanSe n_m(ObserverKind k, Group g) const;
  MeanSe n_m_total(ObserverKind k) const;
  MeanSe drift() const;
  MeanSe c_in_initial(Group g) const;
  MeanSe c_in_final(Group g) const;
};

// per-run window-mean misclassification counts plus the scalar run metrics
RunOutcome evaluate_run(const Trajectory& t, const ObserverConfig& oc);

std::vector<SweepRecord> run_sweep(const RunManifest& m);

struct ResultRow {
  double rho = 0.0, Nr = 0.0, s0 = 0.0;
  uint64_t run_seed = 0;
  std::string observer;
  int group = 1;
  double n_m_mean = 0.0;
  double c_in_initial = 0.0, c_in_final = 0.0;
  double drift_speed = 0.0;
};

std::vector<ResultRow> rows_from_records(const std::vector<SweepRecord>& records);
void write_result_rows(const std::vector<ResultRow>& rows, const std::string& path);
void write_results(const std::vector<SweepRecord>& records, const std::string& path);
std::vector<ResultRow> read_results(const std::string& path);

// decide the worker count: explicit flag, else CROWDOBS_PARALLEL, else hardware
int resolve_parallel(int requested);

}  // namespace crowd
