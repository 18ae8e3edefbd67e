#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelearn/rng.hpp"

namespace treelearn {

// Undirected edge with canonical orientation a < b. Nodes are labeled 1..p.
struct Edge {
  int a = 0, b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(int i, int j) {
  if (i == j) throw std::invalid_argument("make_edge: self-loop");
  return i < j ? Edge{i, j} : Edge{j, i};
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), rank_(n, 0) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // True when x and y were in different components.
  bool unite(int x, int y) {
    int rx = find(x), ry = find(y);
    if (rx == ry) return false;
    if (rank_[rx] < rank_[ry]) std::swap(rx, ry);
    parent_[ry] = rx;
    if (rank_[rx] == rank_[ry]) ++rank_[rx];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

// Labeled tree on nodes 1..p. Construction checks the tree property
// (exactly p-1 distinct edges, connected) via union-find.
class Tree {
 public:
  Tree() : p_(1), adj_(2) {}  // the single-node tree

  Tree(int node_count, std::vector<Edge> edges)
      : p_(node_count), edges_(std::move(edges)) {
    if (p_ < 1) throw std::invalid_argument("Tree: node count must be >= 1");
    for (Edge& e : edges_) {
      if (e.a >= e.b) e = make_edge(e.a, e.b);
      if (e.a < 1 || e.b > p_)
        throw std::invalid_argument("Tree: node label out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw std::invalid_argument("Tree: duplicate edge");
    if (static_cast<int>(edges_.size()) != p_ - 1)
      throw std::invalid_argument("Tree: expected exactly p-1 edges");
    UnionFind uf(p_);
    for (const Edge& e : edges_)
      if (!uf.unite(e.a - 1, e.b - 1))
        throw std::invalid_argument("Tree: edges contain a cycle");
    adj_.assign(p_ + 1, {});
    for (const Edge& e : edges_) {
      adj_[e.a].push_back(e.b);
      adj_[e.b].push_back(e.a);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  int node_count() const { return p_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }

  bool has_edge(int i, int j) const {
    const Edge e = make_edge(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  // Nodes along the unique path u -> v, endpoints included.
  std::vector<int> path_nodes(int u, int v) const {
    check_node(u);
    check_node(v);
    std::vector<int> parent(p_ + 1, 0);
    std::vector<char> seen(p_ + 1, 0);
    std::queue<int> q;
    q.push(u);
    seen[u] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      if (x == v) break;
      for (int y : adj_[x])
        if (!seen[y]) {
          seen[y] = 1;
          parent[y] = x;
          q.push(y);
        }
    }
    std::vector<int> path;
    for (int x = v; x != u; x = parent[x]) path.push_back(x);
    path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
  }

  std::vector<Edge> path_edges(int u, int v) const {
    const std::vector<int> nodes = path_nodes(u, v);
    std::vector<Edge> out;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
      out.push_back(make_edge(nodes[k], nodes[k + 1]));
    return out;
  }

  friend bool operator==(const Tree& x, const Tree& y) {
    return x.p_ == y.p_ && x.edges_ == y.edges_;
  }

 private:
  void check_node(int v) const {
    if (v < 1 || v > p_) throw std::invalid_argument("Tree: node label out of range");
  }

  int p_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// Decode a Pruefer sequence (p-2 labels in 1..p) into the tree it encodes.
// The bijection with labeled trees makes this both the uniform sampler and
// the exhaustive enumerator used by the spanning-tree oracle tests.
inline Tree tree_from_pruefer(int p, std::span<const int> seq) {
  if (p < 2) throw std::invalid_argument("tree_from_pruefer: p must be >= 2");
  if (static_cast<int>(seq.size()) != p - 2)
    throw std::invalid_argument("tree_from_pruefer: sequence must have p-2 entries");
  std::vector<int> degree(p + 1, 1);
  for (int a : seq) {
    if (a < 1 || a > p)
      throw std::invalid_argument("tree_from_pruefer: label out of range");
    ++degree[a];
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
  for (int v = 1; v <= p; ++v)
    if (degree[v] == 1) leaves.push(v);
  std::vector<Edge> edges;
  edges.reserve(p - 1);
  for (int a : seq) {
    const int leaf = leaves.top();
    leaves.pop();
    edges.push_back(make_edge(leaf, a));
    if (--degree[a] == 1) leaves.push(a);
  }
  const int x = leaves.top();
  leaves.pop();
  const int y = leaves.top();
  edges.push_back(make_edge(x, y));
  return Tree(p, std::move(edges));
}

enum class TreeShape { chain, star, uniform_random };

// Deterministic tree generator; `seed` only matters for uniform_random,
// which draws a uniform Pruefer sequence.
inline Tree random_tree(int p, TreeShape shape, std::uint64_t seed) {
  if (p < 2) throw std::invalid_argument("random_tree: p must be >= 2");
  std::vector<Edge> edges;
  switch (shape) {
    case TreeShape::chain:
      for (int i = 1; i < p; ++i) edges.push_back({i, i + 1});
      return Tree(p, std::move(edges));
    case TreeShape::star:
      for (int i = 2; i <= p; ++i) edges.push_back({1, i});
      return Tree(p, std::move(edges));
    case TreeShape::uniform_random: {
      Rng rng(seed);
      std::vector<int> seq(p >= 2 ? p - 2 : 0);
      for (int& s : seq) s = static_cast<int>(rng.below(p)) + 1;
      return tree_from_pruefer(p, seq);
    }
  }
  throw std::invalid_argument("random_tree: unknown shape");
}

inline std::string to_string(const Edge& e) {
  return "(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
}

}  // namespace treelearn
