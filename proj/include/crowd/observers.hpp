#pragma once

#include <vector>

#include "crowd/dynamics.hpp"
#include "crowd/voronoi.hpp"

namespace crowd {

// mean of series[start .. start + window)
double window_average(const std::vector<double>& series, int start, int window);

inline Group classify_agent_only(double v_w) { return v_w >= 0.0 ? Group::One : Group::Two; }

// boundary v = mu * phi in the (phi, v) plane; ties go to Group One
inline Group classify_neighborhood(double v_w, double phi_w, double mu) {
  return v_w >= mu * phi_w ? Group::One : Group::Two;
}

// mean absolute majority excess among l binomially mixed neighbors
double sigma_s(double number_ratio, int l = 6);

// observer scale factor: exp(1 / (density * epsilon^2)) / sigma_s
double mu_scale(double density, double number_ratio, double epsilon, int l = 6);

// per-agent directional neighbor sum projected on +x:
// sum over Voronoi neighbors j of exp(-(r_ij/eps)^2) (v_j . e_ji) (e_ji . e_x),
// with e_ji the minimum-image unit vector from j toward the focal agent
std::vector<double> neighborhood_parameter(const Frame& f, const VoronoiAdjacency& adj, double L,
                                           double epsilon);

// sliding-window observables for a whole trajectory; indexing is
// [window_start * n_agents + agent]
struct WindowSeries {
  int window = 0;
  int n_windows = 0;
  int n_agents = 0;
  std::vector<double> v_w;
  std::vector<double> phi_w;

  double v(int win, int agent) const { return v_w[static_cast<size_t>(win) * n_agents + agent]; }
  double phi(int win, int agent) const {
    return phi_w[static_cast<size_t>(win) * n_agents + agent];
  }
};

WindowSeries window_series(const Trajectory& t, const ObserverConfig& oc);

struct LabeledSample {
  double v_w = 0.0;
  double phi_w = 0.0;
  Group truth = Group::One;
};

struct FitResult {
  double mu_hat = 0.0;
  double training_error = 0.0;  // misclassified fraction under the fitted boundary
};

// zero-intercept linear classifier in the (phi, v) plane: a full-batch hinge
// fit picks the direction, then the slope is refined to the exact minimum of
// the training misclassification count (the boundary family v = mu phi has a
// single free parameter, so the zero-one risk can be swept directly);
// deterministic
FitResult fit_linear_classifier(const std::vector<LabeledSample>& samples);

}  // namespace crowd
