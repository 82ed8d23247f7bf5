#pragma once

#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace npn {

/// Undirected graph on vertices {0, ..., p-1}, kept as a set of ordered
/// pairs (j,k) with j < k. Used for ground truth, estimates, and symmetric
/// differences alike.
struct GraphSpec {
  int p = 0;
  std::set<std::pair<int, int>> edges;

  GraphSpec() = default;
  explicit GraphSpec(int vertex_count) : p(vertex_count) {
    if (vertex_count < 0) throw std::invalid_argument("GraphSpec: negative vertex count");
  }

  void add_edge(int j, int k) {
    if (j == k) throw std::invalid_argument("GraphSpec: self-loops are not allowed");
    if (j < 0 || k < 0 || j >= p || k >= p)
      throw std::invalid_argument("GraphSpec: vertex index out of range");
    if (j > k) std::swap(j, k);
    edges.emplace(j, k);
  }

  bool has_edge(int j, int k) const {
    if (j > k) std::swap(j, k);
    return edges.count({j, k}) > 0;
  }

  int edge_count() const { return static_cast<int>(edges.size()); }

  std::vector<int> degrees() const {
    std::vector<int> deg(p, 0);
    for (const auto& [j, k] : edges) {
      ++deg[j];
      ++deg[k];
    }
    return deg;
  }

  int max_degree() const {
    int best = 0;
    for (int d : degrees()) best = std::max(best, d);
    return best;
  }
};

}  // namespace npn
