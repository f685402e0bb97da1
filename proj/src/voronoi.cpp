#include "crowd/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crowd/errors.hpp"

namespace crowd {

int VoronoiAdjacency::edge_count() const {
  size_t deg = 0;
  for (const auto& nb : neighbors) deg += nb.size();
  return static_cast<int>(deg / 2);
}

namespace {

struct Candidate {
  Vec2 d;       // generator image position relative to the focal agent
  double d2;
  int owner;    // canonical agent index, or -1 for an image of the focal agent itself
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.d2 != b.d2) return a.d2 < b.d2;
  if (a.owner != b.owner) return a.owner < b.owner;
  if (a.d.x != b.d.x) return a.d.x < b.d.x;
  return a.d.y < b.d.y;
}

// convex cell around the origin; src[k] is the candidate index that cut the
// edge v[k] -> v[k+1], or -1 for the seed box
struct Cell {
  std::vector<Vec2> v;
  std::vector<int> src;
  std::vector<Vec2> nv;
  std::vector<int> nsrc;
  std::vector<double> f;

  void reset_box(double half) {
    v = {{-half, -half}, {half, -half}, {half, half}, {-half, half}};
    src = {-1, -1, -1, -1};
  }

  double rmax2() const {
    double m = 0.0;
    for (const auto& p : v) m = std::max(m, norm2(p));
    return m;
  }

  // keep the side of the bisector of (origin, d) containing the origin
  void clip(const Vec2& d, double d2, int id) {
    size_t n = v.size();
    f.resize(n);
    bool any_out = false;
    for (size_t k = 0; k < n; ++k) {
      f[k] = dot(v[k], d) - 0.5 * d2;
      any_out |= f[k] > 0.0;
    }
    if (!any_out) return;
    nv.clear();
    nsrc.clear();
    for (size_t k = 0; k < n; ++k) {
      size_t kn = (k + 1 == n) ? 0 : k + 1;
      double fa = f[k], fb = f[kn];
      if (fa <= 0.0) {
        nv.push_back(v[k]);
        nsrc.push_back(src[k]);
        if (fb > 0.0) {
          double t = fa / (fa - fb);
          nv.push_back(v[k] + t * (v[kn] - v[k]));
          nsrc.push_back(id);
        }
      } else if (fb <= 0.0) {
        double t = fa / (fa - fb);
        nv.push_back(v[k] + t * (v[kn] - v[k]));
        nsrc.push_back(src[k]);
      }
    }
    v.swap(nv);
    src.swap(nsrc);
  }
};

void check_degenerate(const std::vector<Vec2>& pos, double L) {
  size_t n = pos.size();
  double dup2 = 1e-10 * L * 1e-10 * L;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (norm2(min_image(pos[i] - pos[j], L)) < dup2)
        throw GeometryError("coincident generators");
  if (n < 3) return;
  Vec2 ref{};
  bool have_ref = false;
  double tol = 1e-12 * L * L;
  for (size_t k = 1; k < n; ++k) {
    Vec2 d = min_image(pos[k] - pos[0], L);
    if (!have_ref) {
      ref = d;
      have_ref = true;
      continue;
    }
    if (std::abs(cross(ref, d)) > tol) return;
  }
  throw GeometryError("collinear generators");
}

}  // namespace

VoronoiAdjacency voronoi_adjacency(const std::vector<Vec2>& pos, double L) {
  int n = static_cast<int>(pos.size());
  if (n < 2) throw GeometryError("tessellation needs at least 2 generators");
  if (!(L > 0.0)) throw GeometryError("domain edge must be positive");
  check_degenerate(pos, L);

  double eps2 = 1e-9 * L * 1e-9 * L;  // shared segments shorter than this are treated as points
  std::vector<std::vector<int>> found(n);
  std::vector<Candidate> cand;
  Cell cell;

  for (int i = 0; i < n; ++i) {
    // nearest images only; enough whenever the finished cell stays within L/4
    cand.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Vec2 d = min_image(pos[j] - pos[i], L);
      cand.push_back({d, norm2(d), j});
    }
    std::sort(cand.begin(), cand.end(), candidate_less);
    cell.reset_box(0.5 * L);
    double rm2 = cell.rmax2();
    for (const auto& c : cand) {
      if (c.d2 >= 4.0 * rm2) break;
      cell.clip(c.d, c.d2, c.owner);
      rm2 = cell.rmax2();
    }

    if (rm2 > 0.0625 * L * L) {
      // sparse case: the cell may be bounded by farther images, including the
      // agent's own; redo with the full 3x3 tiling
      cand.clear();
      for (int j = 0; j < n; ++j) {
        Vec2 base = min_image(pos[j] - pos[i], L);
        for (int ky = -1; ky <= 1; ++ky) {
          for (int kx = -1; kx <= 1; ++kx) {
            if (j == i && kx == 0 && ky == 0) continue;
            Vec2 d = base + Vec2{kx * L, ky * L};
            cand.push_back({d, norm2(d), j == i ? -1 : j});
          }
        }
      }
      std::sort(cand.begin(), cand.end(), candidate_less);
      cell.reset_box(1.25 * L);
      rm2 = cell.rmax2();
      std::vector<int> owners(cand.size());
      for (size_t k = 0; k < cand.size(); ++k) owners[k] = cand[k].owner;
      for (size_t k = 0; k < cand.size(); ++k) {
        if (cand[k].d2 >= 4.0 * rm2) break;
        cell.clip(cand[k].d, cand[k].d2, static_cast<int>(k));
        rm2 = cell.rmax2();
      }
      size_t m = cell.v.size();
      for (size_t k = 0; k < m; ++k) {
        int s = cell.src[k];
        if (s < 0 || owners[s] < 0) continue;
        Vec2 e = cell.v[(k + 1 == m) ? 0 : k + 1] - cell.v[k];
        if (norm2(e) > eps2) found[i].push_back(owners[s]);
      }
      continue;
    }

    size_t m = cell.v.size();
    for (size_t k = 0; k < m; ++k) {
      int s = cell.src[k];
      if (s < 0) continue;
      Vec2 e = cell.v[(k + 1 == m) ? 0 : k + 1] - cell.v[k];
      if (norm2(e) > eps2) found[i].push_back(s);
    }
  }

  // symmetrize: one surviving positive-length edge on either side makes the pair adjacent
  VoronoiAdjacency adj;
  adj.neighbors.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j : found[i]) {
      adj.neighbors[i].push_back(j);
      adj.neighbors[j].push_back(i);
    }
  }
  for (auto& nb : adj.neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

}  // namespace crowd
