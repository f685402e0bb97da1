#pragma once

#include <vector>

#include "crowd/vec2.hpp"

namespace crowd {

struct VoronoiAdjacency {
  std::vector<std::vector<int>> neighbors;  // sorted, symmetric, no self entries

  int n_agents() const { return static_cast<int>(neighbors.size()); }
  int edge_count() const;
};

// first-neighbor graph of the periodic Voronoi tessellation on the L-torus:
// (i, j) is an edge iff the two cells share a boundary segment of positive length.
// Each cell is cut directly from the bisector half-planes of the generator images
// (3x3 tiling, own images included), so the shared-segment test is explicit.
VoronoiAdjacency voronoi_adjacency(const std::vector<Vec2>& pos, double L);

}  // namespace crowd
