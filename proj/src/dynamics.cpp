#include "crowd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "crowd/errors.hpp"
#include "crowd/rng.hpp"

namespace crowd {

namespace {

// area fraction of the hexagonal close packing, the hard ceiling for disks
constexpr double kMaxPacking = 0.9069;

std::string pair_text(int i, int j, double d) {
  return "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") at distance " +
         std::to_string(d);
}

}  // namespace

void validate(const SimParams& p) {
  if (p.n_agents < 1) throw ConfigError("n_agents must be at least 1");
  if (!(p.density > 0.0) || !(p.density < kMaxPacking))
    throw ConfigError("density must lie in (0, 0.9069)");
  if (!(p.number_ratio >= 0.0) || !(p.number_ratio <= 1.0))
    throw ConfigError("number_ratio must lie in [0, 1]");
  if (!(p.intrinsic_speed >= 0.0)) throw ConfigError("intrinsic_speed must be non-negative");
  if (!(p.mass > 0.0)) throw ConfigError("mass must be positive");
  if (!(p.relax_time > 0.0)) throw ConfigError("relax_time must be positive");
  if (!(p.force_strength > 0.0)) throw ConfigError("force_strength must be positive");
  if (!(p.radius > 0.0)) throw ConfigError("radius must be positive");
  if (!(p.cutoff > 2.0 * p.radius)) throw ConfigError("cutoff must exceed the contact distance 2R");
  if (!(p.dt > 0.0)) throw ConfigError("dt must be positive");
  if (p.n_samples < 1) throw ConfigError("n_samples must be at least 1");
  double ratio = p.sample_interval / p.dt;
  long k = std::lround(ratio);
  if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-6 * ratio)
    throw ConfigError("sample_interval must be an integer multiple of dt");
  if (p.n_agents >= 2) {
    double L = domain_edge(p.n_agents, p.density, p.radius);
    // with a shorter edge a pair could interact through more than one image
    if (L < 2.0 * p.cutoff)
      throw ConfigError("domain edge must be at least twice the force cutoff");
  }
}

int group2_count(const SimParams& p) {
  return static_cast<int>(std::floor(p.number_ratio * p.n_agents + 0.5));
}

int steps_per_sample(const SimParams& p) {
  return static_cast<int>(std::lround(p.sample_interval / p.dt));
}

double domain_edge(int n_agents, double density, double radius) {
  if (n_agents < 1) throw ConfigError("n_agents must be at least 1");
  if (!(density > 0.0) || !(density < kMaxPacking))
    throw ConfigError("density must lie in (0, 0.9069)");
  if (!(radius > 0.0)) throw ConfigError("radius must be positive");
  constexpr double pi = 3.14159265358979323846;
  return radius * std::sqrt(n_agents * pi / density);
}

Vec2 pair_force(const Vec2& delta, const SimParams& p) {
  double d = norm(delta);
  if (d >= p.cutoff) return {};
  double gap = d - 2.0 * p.radius;
  if (!(gap > 0.0))
    throw SimulationFault("overlapping pair in force evaluation, distance " + std::to_string(d));
  double mag = p.force_strength / (gap * gap * gap);
  return (mag / d) * delta;
}

std::vector<Vec2> net_forces(const std::vector<Vec2>& pos, double L, const SimParams& p) {
  size_t n = pos.size();
  std::vector<Vec2> f(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      Vec2 d = min_image(pos[i] - pos[j], L);
      double d2 = norm2(d);
      if (d2 >= p.cutoff * p.cutoff) continue;
      Vec2 fij = pair_force(d, p);
      f[i] += fij;
      f[j] -= fij;
    }
  }
  return f;
}

double min_pair_gap(const std::vector<Vec2>& pos, double L) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pos.size(); ++i)
    for (size_t j = i + 1; j < pos.size(); ++j)
      best = std::min(best, norm2(min_image(pos[i] - pos[j], L)));
  return std::sqrt(best);
}

namespace {

// closest pair; squared distances avoid the sqrt in the hot guard check
struct ClosestPair {
  int i = -1, j = -1;
  double d2 = std::numeric_limits<double>::infinity();
};

// exact relaxation toward v0 + tau/m * F with the pair force frozen over the substep;
// exact for an isolated agent, first order in the force variation otherwise
void advance(const Frame& in, Frame& out, const std::vector<Group>& labels, const SimParams& p,
             double L, double h) {
  auto F = net_forces(in.pos, L, p);
  size_t n = in.pos.size();
  double tau = p.relax_time;
  double decay = std::exp(-h / tau);
  double rise = tau * (1.0 - decay);
  out.pos.resize(n);
  out.vel.resize(n);
  for (size_t i = 0; i < n; ++i) {
    Vec2 v0 = {desired_sign(labels[i]) * p.intrinsic_speed, 0.0};
    Vec2 veq = v0 + (tau / p.mass) * F[i];
    Vec2 dv = in.vel[i] - veq;
    out.vel[i] = veq + decay * dv;
    Vec2 x = in.pos[i] + h * veq + rise * dv;
    out.pos[i] = {wrap_coord(x.x, L), wrap_coord(x.y, L)};
  }
}

// first pair breaking the hard floor or moving faster than the gap-rate limit
ClosestPair find_violation(const std::vector<Vec2>& pre, const std::vector<Vec2>& post, double L,
                           const SimParams& p) {
  double floor = 2.0 * p.radius + kGapGuardFactor * p.radius;
  double floor2 = floor * floor;
  double cut2 = p.cutoff * p.cutoff;
  double two_r = 2.0 * p.radius;
  int n = static_cast<int>(post.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d2_post = norm2(min_image(post[i] - post[j], L));
      if (d2_post < floor2) return {i, j, d2_post};
      double d2_pre = norm2(min_image(pre[i] - pre[j], L));
      if (d2_pre >= cut2 && d2_post >= cut2) continue;
      double gap_pre = std::sqrt(d2_pre) - two_r;
      double gap_post = std::sqrt(d2_post) - two_r;
      if (std::abs(gap_post - gap_pre) > kGapRateLimit * gap_pre) return {i, j, d2_post};
    }
  }
  return {};
}

void guarded_step(const Frame& in, Frame& out, const std::vector<Group>& labels,
                  const SimParams& p, double L, double h, int depth) {
  advance(in, out, labels, p, L, h);
  ClosestPair c = find_violation(in.pos, out.pos, L, p);
  if (c.i < 0) return;
  if (depth == kMaxHalvings)
    throw SimulationFault("halving budget exhausted, " + pair_text(c.i, c.j, std::sqrt(c.d2)));
  Frame mid;
  guarded_step(in, mid, labels, p, L, 0.5 * h, depth + 1);
  guarded_step(mid, out, labels, p, L, 0.5 * h, depth + 1);
}

}  // namespace

void step(Frame& f, const std::vector<Group>& labels, const SimParams& p, double L) {
  Frame next;
  guarded_step(f, next, labels, p, L, p.dt, 0);
  f = std::move(next);
}

InitialState init_configuration(const SimParams& p, double L) {
  int n = p.n_agents;
  Rng rng(p.seed);

  // triangular lattice sized to hold n sites: ny rows of nx columns,
  // alternate rows shifted by half a column
  int ny = std::max(1, static_cast<int>(std::lround(std::sqrt(n / (std::sqrt(3.0) / 2.0)))));
  int nx = (n + ny - 1) / ny;
  double dx = L / nx;
  double dy = L / ny;
  std::vector<Vec2> sites;
  sites.reserve(static_cast<size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    double shift = (iy % 2 == 0) ? 0.25 : 0.75;
    for (int ix = 0; ix < nx; ++ix)
      sites.push_back({wrap_coord((ix + shift) * dx, L), wrap_coord((iy + 0.5) * dy, L)});
  }

  double site_gap = (sites.size() >= 2) ? min_pair_gap(sites, L) - 2.0 * p.radius : 0.25 * L;
  if (n >= 2 && site_gap < 15.0 * kGapGuardFactor * p.radius)
    throw ConfigError("density too high to seat agents with a safe margin");

  rng.shuffle(sites);
  sites.resize(n);

  // radial jitter below 0.45 * gap keeps every pair clear of contact
  double jitter = 0.45 * site_gap;
  std::vector<Vec2> pos(n);
  for (int i = 0; i < n; ++i) {
    double ang = 2.0 * 3.14159265358979323846 * rng.uniform();
    double rad = jitter * std::sqrt(rng.uniform());
    pos[i] = {wrap_coord(sites[i].x + rad * std::cos(ang), L),
              wrap_coord(sites[i].y + rad * std::sin(ang), L)};
  }

  std::vector<Group> labels(n, Group::One);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  int k = group2_count(p);
  for (int i = 0; i < k; ++i) labels[order[i]] = Group::Two;

  // spread the jittered lattice with the drive off, then start from rest
  SimParams relax = p;
  relax.intrinsic_speed = 0.0;
  Frame f{std::move(pos), std::vector<Vec2>(n)};
  try {
    for (int s = 0; s < kRelaxSteps; ++s) step(f, labels, relax, L);
  } catch (const SimulationFault& e) {
    throw ConfigError(std::string("initial placement failed to relax: ") + e.what());
  }

  return {std::move(f.pos), std::move(labels)};
}

Trajectory simulate_from(Frame start, std::vector<Group> labels, const SimParams& p, double L) {
  size_t n = labels.size();
  if (start.pos.size() != n || start.vel.size() != n)
    throw ConfigError("state and label sizes disagree");
  if (n >= 2) {
    double gap = min_pair_gap(start.pos, L);
    if (gap <= 2.0 * p.radius) throw SimulationFault("overlapping initial pair");
  }

  Trajectory t;
  t.params = p;
  t.domain_edge = L;
  t.labels = std::move(labels);
  t.frames.reserve(p.n_samples);
  t.frames.push_back(start);

  int sps = steps_per_sample(p);
  Frame f = std::move(start);
  for (int s = 1; s < p.n_samples; ++s) {
    for (int k = 0; k < sps; ++k) step(f, t.labels, p, L);
    t.frames.push_back(f);
  }
  return t;
}

Trajectory run_simulation(const SimParams& p) {
  validate(p);
  double L = domain_edge(p.n_agents, p.density, p.radius);
  InitialState init = init_configuration(p, L);
  Frame start{std::move(init.pos), std::vector<Vec2>(p.n_agents)};
  return simulate_from(std::move(start), std::move(init.labels), p, L);
}

}  // namespace crowd
