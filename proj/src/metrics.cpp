#include "crowd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowd {

MisclassCounts misclassification_count(const std::vector<Group>& truth,
                                       const std::vector<Group>& pred) {
  if (truth.size() != pred.size())
    throw std::invalid_argument("label and prediction lengths disagree");
  MisclassCounts c;
  for (size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == pred[i]) continue;
    (truth[i] == Group::One ? c.group1 : c.group2) += 1;
  }
  return c;
}

double drift_speed(const Trajectory& t, double steady_fraction) {
  int n_frames = static_cast<int>(t.frames.size());
  int n = t.n_agents();
  if (n_frames == 0 || n == 0) throw std::invalid_argument("empty trajectory");
  if (!(steady_fraction > 0.0) || !(steady_fraction <= 1.0))
    throw std::invalid_argument("steady_fraction must lie in (0, 1]");
  int first = n_frames - static_cast<int>(std::floor(steady_fraction * n_frames));
  first = std::clamp(first, 0, n_frames - 1);
  double s = 0.0;
  long count = 0;
  for (int k = first; k < n_frames; ++k) {
    for (const Vec2& v : t.frames[k].vel) s += v.x;
    count += n;
  }
  return s / static_cast<double>(count);
}

double mixture_velocity(double s0, double number_ratio) {
  return s0 * (1.0 - 2.0 * number_ratio);
}

double trapped_fraction(const Frame& f, const std::vector<Group>& labels, const SimParams& p,
                        double L, Group group) {
  if (f.pos.size() != labels.size() || f.vel.size() != labels.size())
    throw std::invalid_argument("frame size does not match labels");
  int members = 0, trapped = 0;
  auto forces = net_forces(f.pos, L, p);
  double m_over_tau = p.mass / p.relax_time;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != group) continue;
    ++members;
    double toward = desired_sign(labels[i]);  // +1 along +x for One, -1 for Two
    double drive = m_over_tau * (f.vel[i].x * toward - p.intrinsic_speed);
    double push = forces[i].x * (-toward);  // neighbor force against the desired direction
    if (drive < push) ++trapped;
  }
  if (members == 0) return 0.0;
  return static_cast<double>(trapped) / members;
}

Histogram velocity_histogram(const Trajectory& t, Group group, int bins,
                             std::optional<std::pair<double, double>> range) {
  if (bins < 1) throw std::invalid_argument("need at least one bin");
  Histogram h;
  if (range) {
    h.lo = range->first;
    h.hi = range->second;
  } else {
    h.lo = -1.2 * t.params.intrinsic_speed;
    h.hi = 1.2 * t.params.intrinsic_speed;
  }
  if (!(h.hi > h.lo)) throw std::invalid_argument("histogram range is empty");
  h.mass.assign(bins, 0.0);
  long count = 0;
  double scale = bins / (h.hi - h.lo);
  for (const Frame& f : t.frames) {
    for (size_t i = 0; i < t.labels.size(); ++i) {
      if (t.labels[i] != group) continue;
      int k = static_cast<int>(std::floor((f.vel[i].x - h.lo) * scale));
      k = std::clamp(k, 0, bins - 1);
      h.mass[k] += 1.0;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("group has no members");
  for (double& m : h.mass) m /= static_cast<double>(count);
  return h;
}

}  // namespace crowd
