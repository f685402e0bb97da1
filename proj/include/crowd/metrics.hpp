#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "crowd/dynamics.hpp"

namespace crowd {

struct MisclassCounts {
  int group1 = 0;  // true Group One members predicted as Two
  int group2 = 0;  // true Group Two members predicted as One

  int total() const { return group1 + group2; }
};

MisclassCounts misclassification_count(const std::vector<Group>& truth,
                                       const std::vector<Group>& pred);

// mean v_x over all agents over the trailing window of frames
double drift_speed(const Trajectory& t, double steady_fraction = 0.5);

double mixture_velocity(double s0, double number_ratio);

// fraction of the group whose drive along its desired direction is beaten by
// the net neighbor push against it
double trapped_fraction(const Frame& f, const std::vector<Group>& labels, const SimParams& p,
                        double L, Group group);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> mass;  // sums to 1

  double bin_center(int k) const {
    return lo + (hi - lo) * (k + 0.5) / static_cast<double>(mass.size());
  }
};

// normalized v_x histogram for one group, pooled over all frames; the default
// range is [-1.2 s0, 1.2 s0], out-of-range samples land in the edge bins
Histogram velocity_histogram(const Trajectory& t, Group group, int bins = 61,
                             std::optional<std::pair<double, double>> range = {});

}  // namespace crowd
