#include "crowd/observers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crowd/errors.hpp"

namespace crowd {

double window_average(const std::vector<double>& series, int start, int window) {
  if (window < 1) throw std::out_of_range("window must be at least 1");
  if (start < 0 || static_cast<size_t>(start) + window > series.size())
    throw std::out_of_range("window exceeds the series");
  double s = 0.0;
  for (int k = 0; k < window; ++k) s += series[start + k];
  return s / window;
}

double sigma_s(double number_ratio, int l) {
  if (l < 1) throw std::invalid_argument("neighbor budget must be at least 1");
  if (!(number_ratio >= 0.0) || !(number_ratio <= 1.0))
    throw std::invalid_argument("number_ratio must lie in [0, 1]");
  double q = 1.0 - number_ratio;
  double s = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= l; ++k) {
    s += binom * std::pow(number_ratio, k) * std::pow(q, l - k) * std::abs(l - 2 * k);
    binom = binom * (l - k) / (k + 1);
  }
  return s;
}

double mu_scale(double density, double number_ratio, double epsilon, int l) {
  if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  double s = sigma_s(number_ratio, l);
  if (!(s > 0.0)) throw std::domain_error("degenerate neighbor-mix normalizer");
  return std::exp(1.0 / (density * epsilon * epsilon)) / s;
}

std::vector<double> neighborhood_parameter(const Frame& f, const VoronoiAdjacency& adj, double L,
                                           double epsilon) {
  int n = adj.n_agents();
  if (static_cast<int>(f.pos.size()) != n || static_cast<int>(f.vel.size()) != n)
    throw std::invalid_argument("frame size does not match the tessellation");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  std::vector<double> phi(n, 0.0);
  double inv_eps2 = 1.0 / (epsilon * epsilon);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j : adj.neighbors[i]) {
      Vec2 d = min_image(f.pos[i] - f.pos[j], L);  // points from j toward i
      double r2 = norm2(d);
      double r = std::sqrt(r2);
      Vec2 e = (1.0 / r) * d;
      s += std::exp(-r2 * inv_eps2) * dot(f.vel[j], e) * e.x;
    }
    phi[i] = s;
  }
  return phi;
}

WindowSeries window_series(const Trajectory& t, const ObserverConfig& oc) {
  int n_frames = static_cast<int>(t.frames.size());
  int n = t.n_agents();
  int w = oc.window;
  if (w < 1 || w > n_frames) throw std::out_of_range("window exceeds the trajectory");

  WindowSeries ws;
  ws.window = w;
  ws.n_windows = n_frames - w + 1;
  ws.n_agents = n;

  // prefix sums over frames, one running column per agent
  std::vector<double> sv(static_cast<size_t>(n_frames + 1) * n, 0.0);
  std::vector<double> sp(static_cast<size_t>(n_frames + 1) * n, 0.0);
  for (int k = 0; k < n_frames; ++k) {
    const Frame& f = t.frames[k];
    std::vector<double> phi =
        neighborhood_parameter(f, voronoi_adjacency(f.pos, t.domain_edge), t.domain_edge,
                               oc.epsilon);
    const double* pv = &sv[static_cast<size_t>(k) * n];
    const double* pp = &sp[static_cast<size_t>(k) * n];
    double* cv = &sv[static_cast<size_t>(k + 1) * n];
    double* cp = &sp[static_cast<size_t>(k + 1) * n];
    for (int i = 0; i < n; ++i) {
      cv[i] = pv[i] + f.vel[i].x;
      cp[i] = pp[i] + phi[i];
    }
  }

  ws.v_w.resize(static_cast<size_t>(ws.n_windows) * n);
  ws.phi_w.resize(static_cast<size_t>(ws.n_windows) * n);
  for (int s = 0; s < ws.n_windows; ++s) {
    const double* av = &sv[static_cast<size_t>(s) * n];
    const double* bv = &sv[static_cast<size_t>(s + w) * n];
    const double* ap = &sp[static_cast<size_t>(s) * n];
    const double* bp = &sp[static_cast<size_t>(s + w) * n];
    for (int i = 0; i < n; ++i) {
      ws.v_w[static_cast<size_t>(s) * n + i] = (bv[i] - av[i]) / w;
      ws.phi_w[static_cast<size_t>(s) * n + i] = (bp[i] - ap[i]) / w;
    }
  }
  return ws;
}

namespace {

int count_wrong(const std::vector<LabeledSample>& samples, double mu) {
  int wrong = 0;
  for (const auto& s : samples) wrong += classify_neighborhood(s.v_w, s.phi_w, mu) != s.truth;
  return wrong;
}

// Exact empirical-risk refinement along the one-parameter boundary family
// v = mu * phi. Sample i flips prediction where mu crosses v_i / phi_i, so the
// training error is piecewise constant with O(n) breakpoints; sweep them and
// keep the minimizer nearest the seed (ties keep the hinge solution's basin).
double refine_mu(const std::vector<LabeledSample>& samples, double seed_mu, int& best_wrong) {
  struct Event {
    double r;
    int d_at;     // error change taking effect at mu == r  (phi < 0: Two -> One)
    int d_after;  // error change just past r               (phi > 0: One -> Two)
  };
  std::vector<Event> events;
  events.reserve(samples.size());
  int err = 0;  // error of the mu -> -inf limit
  for (const auto& s : samples) {
    double r = s.phi_w == 0.0 ? 0.0 : s.v_w / s.phi_w;
    if (s.phi_w == 0.0 || !std::isfinite(r)) {
      // no usable breakpoint; for any moderate mu the sign of v decides
      err += classify_agent_only(s.v_w) != s.truth;
      continue;
    }
    if (s.phi_w > 0.0) {  // One for mu <= r, Two after
      err += s.truth != Group::One;
      events.push_back({r, 0, s.truth == Group::One ? 1 : -1});
    } else {  // Two for mu < r, One from r on
      err += s.truth != Group::Two;
      events.push_back({r, s.truth == Group::One ? -1 : 1, 0});
    }
  }

  int best = std::numeric_limits<int>::max();
  double best_mu = seed_mu;
  auto consider = [&](double mu, int e) {
    if (e < best || (e == best && std::abs(mu - seed_mu) < std::abs(best_mu - seed_mu))) {
      best = e;
      best_mu = mu;
    }
  };

  if (events.empty()) {
    best_wrong = err;
    return seed_mu;
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.r < b.r; });
  consider(seed_mu < events.front().r ? seed_mu : events.front().r - 1.0, err);
  size_t k = 0;
  while (k < events.size()) {
    double r = events[k].r;
    int at = 0, after = 0;
    for (; k < events.size() && events[k].r == r; ++k) {
      at += events[k].d_at;
      after += events[k].d_after;
    }
    err += at;
    consider(r, err);
    err += after;
    double repr;
    if (k == events.size())
      repr = seed_mu > r ? seed_mu : r + 1.0;
    else if (seed_mu > r && seed_mu < events[k].r)
      repr = seed_mu;
    else
      repr = 0.5 * r + 0.5 * events[k].r;  // halves first, the ratios can be huge
    consider(repr, err);
  }
  best_wrong = best;
  return best_mu;
}

}  // namespace

FitResult fit_linear_classifier(const std::vector<LabeledSample>& samples) {
  size_t n = samples.size();
  if (n == 0) throw FitError("no samples");
  bool has1 = false, has2 = false;
  for (const auto& s : samples) (s.truth == Group::One ? has1 : has2) = true;
  if (!has1 || !has2) throw FitError("need samples from both groups");

  // full-batch Pegasos: step 1/(reg t) with projection onto the 1/sqrt(reg) ball
  constexpr double reg = 1e-3;
  constexpr int epochs = 10000;

  double w1 = 1.0, w2 = 0.0;
  double inv_n = 1.0 / static_cast<double>(n);
  for (int t = 1; t <= epochs; ++t) {
    double g1 = reg * w1, g2 = reg * w2;
    for (const auto& s : samples) {
      double y = (s.truth == Group::One) ? 1.0 : -1.0;
      if (y * (w1 * s.v_w + w2 * s.phi_w) < 1.0) {
        g1 -= y * s.v_w * inv_n;
        g2 -= y * s.phi_w * inv_n;
      }
    }
    double eta = 1.0 / (reg * static_cast<double>(t));
    w1 -= eta * g1;
    w2 -= eta * g2;
    double norm = std::sqrt(w1 * w1 + w2 * w2) * std::sqrt(reg);
    if (norm > 1.0) {
      w1 /= norm;
      w2 /= norm;
    }
  }

  if (!(w1 > 1e-12)) throw FitError("fit degenerated to a non-velocity boundary");

  // the hinge surrogate picks the direction; the misclassification count is
  // what the observer comparison is scored on, so finish with the exact
  // one-dimensional minimizer (the family has a single free parameter)
  int best_wrong = 0;
  double mu = refine_mu(samples, -w2 / w1, best_wrong);
  return {mu, count_wrong(samples, mu) * inv_n};
}

}  // namespace crowd
