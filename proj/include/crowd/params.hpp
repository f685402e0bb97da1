#pragma once

#include <cstdint>
#include <optional>

namespace crowd {

struct SimParams {
  int n_agents = 42;
  double number_ratio = 0.5;     // fraction of agents driven toward -x
  double density = 0.30847;      // disk area fraction; the same number feeds the observer scale
  double intrinsic_speed = 1.0;  // s0
  double mass = 1.0;
  double relax_time = 0.2;       // tau
  double force_strength = 0.2;   // gamma
  double radius = 1.0;
  double cutoff = 3.0;           // pair force range, measured center to center
  double dt = 0.01;
  double sample_interval = 0.1;
  int n_samples = 1000;
  uint64_t seed = 1;
};

// throws ConfigError on invalid parameters
void validate(const SimParams& p);

// round-half-up head count of the -x group
int group2_count(const SimParams& p);

int steps_per_sample(const SimParams& p);

struct ObserverConfig {
  int window = 50;
  double epsilon = 3.0;      // kernel length scale
  int neighbor_budget = 6;   // expected first-neighbor count in the scale normalizer
  std::optional<double> mu;  // override; computed from (density, number_ratio) when unset
};

}  // namespace crowd
