#pragma once

#include <vector>

#include "crowd/dynamics.hpp"
#include "crowd/voronoi.hpp"

namespace crowd {

struct UnionFind {
  std::vector<int> parent;
  std::vector<int> rank;

  explicit UnionFind(int n) : parent(n), rank(n, 0) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
  }
};

// connected components of the same-group induced subgraph; an isolated member
// counts as its own cluster, an empty group gives 0
int cluster_count(const VoronoiAdjacency& adj, const std::vector<Group>& labels, Group group);

}  // namespace crowd
