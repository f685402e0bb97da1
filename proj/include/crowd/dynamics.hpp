#pragma once

#include <cstdint>
#include <vector>

#include "crowd/params.hpp"
#include "crowd/vec2.hpp"

namespace crowd {

enum class Group : uint8_t { One = 1, Two = 2 };  // One is driven toward +x, Two toward -x

inline double desired_sign(Group g) { return g == Group::One ? 1.0 : -1.0; }

struct Frame {
  std::vector<Vec2> pos;
  std::vector<Vec2> vel;
};

struct Trajectory {
  SimParams params;
  double domain_edge = 0.0;
  std::vector<Group> labels;
  std::vector<Frame> frames;  // frame k sampled at t = k * sample_interval, frame 0 at t = 0

  double time_of(int frame) const { return frame * params.sample_interval; }
  int n_agents() const { return static_cast<int>(labels.size()); }
};

// pairs may not approach closer than 2R + this margin within one accepted step
inline constexpr double kGapGuardFactor = 1e-3;
// nor may an interacting pair's surface gap change by more than this fraction
// of its starting value: the contact force is frozen across a substep, and it
// diverges as gap^-3, so steps that move a pair by order of its own gap are
// far outside the update's accuracy range and launch agents unphysically
inline constexpr double kGapRateLimit = 0.25;
inline constexpr int kMaxHalvings = 12;
inline constexpr int kRelaxSteps = 100;

// square box edge holding n disks of the given radius at the given area fraction
double domain_edge(int n_agents, double density, double radius);

// force on the agent displaced by delta from its partner (delta = x_i - x_j, minimum image);
// throws SimulationFault when the disks overlap
Vec2 pair_force(const Vec2& delta, const SimParams& p);

std::vector<Vec2> net_forces(const std::vector<Vec2>& pos, double L, const SimParams& p);

double min_pair_gap(const std::vector<Vec2>& pos, double L);

struct InitialState {
  std::vector<Vec2> pos;
  std::vector<Group> labels;
};

// jittered triangular lattice, randomly permuted, then relaxed with the drive off
InitialState init_configuration(const SimParams& p, double L);

// advance by p.dt; retries with halved substeps when a pair would close below
// 2R + kGapGuardFactor * R or an interacting pair's gap would change faster
// than kGapRateLimit allows, throws SimulationFault past kMaxHalvings
void step(Frame& f, const std::vector<Group>& labels, const SimParams& p, double L);

Trajectory simulate_from(Frame start, std::vector<Group> labels, const SimParams& p, double L);

Trajectory run_simulation(const SimParams& p);

}  // namespace crowd
