#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "treelearn/dataset.hpp"
#include "treelearn/estimation.hpp"
#include "treelearn/tree.hpp"

namespace treelearn {

// Symmetric weight per unordered node pair, upper-triangle storage.
class WeightedPairs {
 public:
  explicit WeightedPairs(int node_count)
      : p_(node_count), w_(static_cast<std::size_t>(node_count) * (node_count - 1) / 2, 0.0) {
    if (node_count < 2) throw std::invalid_argument("WeightedPairs: p must be >= 2");
  }

  int node_count() const { return p_; }

  double& at(int i, int j) { return w_[index(i, j)]; }
  double at(int i, int j) const { return w_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    if (i == j || i < 1 || j < 1 || i > p_ || j > p_)
      throw std::invalid_argument("WeightedPairs: bad pair");
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i - 1) * p_ - static_cast<std::size_t>(i) * (i + 1) / 2 +
           j - 1;
  }

  int p_;
  std::vector<double> w_;
};

// Maximum spanning tree by Kruskal over the complete graph. Equal-weight
// edges are taken in ascending lexicographic order on (i, j), i < j, which
// fixes one reproducible answer where the maximizer is not unique. Weights
// are compared exactly as floating values.
inline Tree mst(const WeightedPairs& w) {
  const int p = w.node_count();
  struct Cand {
    double weight;
    Edge e;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) {
      const double v = w.at(i, j);
      if (!std::isfinite(v)) throw std::invalid_argument("mst: non-finite weight");
      cands.push_back({v, {i, j}});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    return x.e < y.e;
  });
  UnionFind uf(p);
  std::vector<Edge> edges;
  edges.reserve(p - 1);
  for (const Cand& c : cands) {
    if (uf.unite(c.e.a - 1, c.e.b - 1)) {
      edges.push_back(c.e);
      if (static_cast<int>(edges.size()) == p - 1) break;
    }
  }
  return Tree(p, std::move(edges));
}

// Plug-in mutual information for every unordered node pair.
inline WeightedPairs pairwise_plugin_mi(const Dataset& ds) {
  WeightedPairs w(ds.node_count);
  for (int i = 1; i <= ds.node_count; ++i)
    for (int j = i + 1; j <= ds.node_count; ++j)
      w.at(i, j) = plugin_mi_bits(empirical_pairwise(ds, i, j));
  return w;
}

// The Chow-Liu estimate: maximum spanning tree over plug-in pairwise
// mutual information weights.
inline Tree chow_liu(const Dataset& ds) { return mst(pairwise_plugin_mi(ds)); }

// When `truth` != `estimate`, produces edges e in truth \ estimate and
// g = (u, ubar) in estimate \ truth such that e lies on path_truth(u, ubar)
// and g lies on path_estimate(w, wbar) for e = (w, wbar); nullopt when the
// trees coincide. e is the lexicographically smallest missing edge; g is
// found by walking the estimate's path between e's endpoints and taking the
// first edge crossing the cut that removing e induces in the true tree,
// which satisfies both path conditions by construction.
inline std::optional<std::pair<Edge, Edge>> two_trees_witness(const Tree& truth,
                                                              const Tree& estimate) {
  if (truth.node_count() != estimate.node_count())
    throw std::invalid_argument("two_trees_witness: node-set mismatch");
  std::vector<Edge> missing;
  std::set_difference(truth.edges().begin(), truth.edges().end(),
                      estimate.edges().begin(), estimate.edges().end(),
                      std::back_inserter(missing));
  if (missing.empty()) return std::nullopt;
  const Edge e = missing.front();

  // Side of the cut each node falls on when e is removed from `truth`.
  const int p = truth.node_count();
  std::vector<char> side(p + 1, 0);
  std::vector<int> stack{e.a};
  side[e.a] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y : truth.neighbors(x)) {
      if ((x == e.a && y == e.b) || (x == e.b && y == e.a)) continue;
      if (!side[y]) {
        side[y] = 1;
        stack.push_back(y);
      }
    }
  }
  for (const Edge& g : estimate.path_edges(e.a, e.b))
    if (side[g.a] != side[g.b]) return {{e, g}};
  throw std::logic_error("two_trees_witness: estimate path never crosses the cut");
}

}  // namespace treelearn
