#include "crowd/clusters.hpp"

#include "crowd/errors.hpp"

namespace crowd {

int cluster_count(const VoronoiAdjacency& adj, const std::vector<Group>& labels, Group group) {
  int n = adj.n_agents();
  if (static_cast<int>(labels.size()) != n)
    throw GeometryError("label count does not match the tessellation");
  UnionFind uf(n);
  for (int i = 0; i < n; ++i) {
    if (labels[i] != group) continue;
    for (int j : adj.neighbors[i])
      if (j > i && labels[j] == group) uf.unite(i, j);
  }
  int clusters = 0;
  for (int i = 0; i < n; ++i)
    if (labels[i] == group && uf.find(i) == i) ++clusters;
  return clusters;
}

}  // namespace crowd
