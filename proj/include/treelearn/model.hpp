#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelearn/dataset.hpp"
#include "treelearn/prob.hpp"
#include "treelearn/rng.hpp"
#include "treelearn/tree.hpp"

namespace treelearn {

// Power-law tail parameters (c, c1, c2) with c1/k^c <= p(k) <= c2/k^c.
// For finite alphabets these hold trivially; they are caller-asserted
// metadata consumed only by the sample-bound calculators, never inferred.
struct TailParams {
  double c = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

inline constexpr double kTableTol = 1e-12;   // per-table normalization/consistency
inline constexpr double kSumTol = 1e-10;     // aggregate full-joint sums

// Tree-structured Markov random field over a finite alphabet of size M.
// The distribution is
//   p(x) = prod_i p(x_i) * prod_{(i,j) in E} p(x_i, x_j) / (p(x_i) p(x_j)).
// Edge joints are stored for the canonical orientation (rows index the
// smaller-labeled endpoint). Immutable by convention after construction;
// all operations here are read-only and thread-safe.
struct DiscreteTreeModel {
  Tree tree;
  int alphabet_size = 0;                            // M >= 2
  std::vector<int> symbol_values;                   // size M, e.g. {1..M} or {-1,+1}
  std::vector<std::vector<double>> node_marginals;  // [p][M], node i at index i-1
  std::map<Edge, Table> edge_joints;                // MxM per tree edge
  bool allow_degenerate_edges = false;
  std::optional<TailParams> tail;                   // caller-supplied metadata

  int symbol_index(int value) const {
    for (int k = 0; k < alphabet_size; ++k)
      if (symbol_values[k] == value) return k;
    return -1;
  }
};

inline std::vector<int> default_symbols(int m) {
  std::vector<int> v(m);
  for (int k = 0; k < m; ++k) v[k] = k + 1;
  return v;
}

namespace detail {

// True when the joint encodes a deterministic map in either direction
// (at most one positive cell per row, or per column).
inline bool is_deterministic_joint(const Table& t) {
  bool row_fun = true, col_fun = true;
  for (std::size_t i = 0; i < t.rows() && row_fun; ++i) {
    int nz = 0;
    for (std::size_t j = 0; j < t.cols(); ++j) nz += t(i, j) > 0.0;
    if (nz > 1) row_fun = false;
  }
  for (std::size_t j = 0; j < t.cols() && col_fun; ++j) {
    int nz = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) nz += t(i, j) > 0.0;
    if (nz > 1) col_fun = false;
  }
  return row_fun || col_fun;
}

}  // namespace detail

// Model admissibility report; empty iff the model satisfies every invariant.
// Violations are data, not exceptions: callers inspect the report.
inline std::vector<std::string> validate(const DiscreteTreeModel& m) {
  std::vector<std::string> report;
  auto flag = [&report](const std::string& s) { report.push_back(s); };
  const int p = m.tree.node_count();
  const int M = m.alphabet_size;

  if (M < 2) flag("alphabet size must be >= 2");
  if (static_cast<int>(m.symbol_values.size()) != M)
    flag("symbol value list does not match alphabet size");
  else {
    auto sorted = m.symbol_values;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      flag("symbol values are not distinct");
  }
  if (static_cast<int>(m.node_marginals.size()) != p) {
    flag("marginal list does not match node count");
    return report;
  }
  for (int i = 1; i <= p; ++i) {
    const auto& mu = m.node_marginals[i - 1];
    if (static_cast<int>(mu.size()) != M) {
      flag("node " + std::to_string(i) + ": marginal has wrong length");
      continue;
    }
    double s = 0.0;
    bool neg = false;
    for (double v : mu) {
      s += v;
      neg |= v < 0.0;
    }
    if (neg) flag("node " + std::to_string(i) + ": negative marginal entry");
    if (std::abs(s - 1.0) > kTableTol)
      flag("node " + std::to_string(i) + ": marginal sums to " + std::to_string(s));
  }
  for (const Edge& e : m.tree.edges()) {
    auto it = m.edge_joints.find(e);
    if (it == m.edge_joints.end()) {
      flag("edge " + to_string(e) + ": joint missing");
      continue;
    }
    const Table& t = it->second;
    if (t.rows() != static_cast<std::size_t>(M) || t.cols() != static_cast<std::size_t>(M)) {
      flag("edge " + to_string(e) + ": joint has wrong shape");
      continue;
    }
    bool neg = false;
    for (double v : t.data()) neg |= v < 0.0;
    if (neg) flag("edge " + to_string(e) + ": negative joint entry");
    if (std::abs(t.sum() - 1.0) > kTableTol)
      flag("edge " + to_string(e) + ": joint sums to " + std::to_string(t.sum()));
    const auto rs = t.row_sums();
    const auto cs = t.col_sums();
    for (int k = 0; k < M; ++k) {
      if (std::abs(rs[k] - m.node_marginals[e.a - 1][k]) > kTableTol) {
        flag("edge " + to_string(e) + ": row sums inconsistent with marginal of node " +
             std::to_string(e.a));
        break;
      }
    }
    for (int k = 0; k < M; ++k) {
      if (std::abs(cs[k] - m.node_marginals[e.b - 1][k]) > kTableTol) {
        flag("edge " + to_string(e) + ": column sums inconsistent with marginal of node " +
             std::to_string(e.b));
        break;
      }
    }
    if (mutual_information_bits(t) <= kTableTol)
      flag("edge " + to_string(e) +
           ": zero mutual information (structure not identifiable)");
    if (!m.allow_degenerate_edges && detail::is_deterministic_joint(t))
      flag("edge " + to_string(e) +
           ": deterministic relation between endpoints (set allow_degenerate_edges to permit)");
  }
  for (const auto& [e, t] : m.edge_joints)
    if (!m.tree.has_edge(e.a, e.b))
      flag("joint stored for non-edge " + to_string(e));
  return report;
}

inline void require_valid(const DiscreteTreeModel& m) {
  auto report = validate(m);
  if (!report.empty())
    throw std::invalid_argument("invalid model: " + report.front());
}

// Exact probability of one configuration, given as symbol values.
inline double joint_probability(const DiscreteTreeModel& m, std::span<const int> x) {
  const int p = m.tree.node_count();
  if (static_cast<int>(x.size()) != p)
    throw std::invalid_argument("joint_probability: configuration has wrong length");
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) {
    idx[i] = m.symbol_index(x[i]);
    if (idx[i] < 0)
      throw std::invalid_argument("joint_probability: symbol outside the alphabet");
  }
  double prod = 1.0;
  for (int i = 0; i < p; ++i) prod *= m.node_marginals[i][idx[i]];
  for (const Edge& e : m.tree.edges()) {
    const double pa = m.node_marginals[e.a - 1][idx[e.a - 1]];
    const double pb = m.node_marginals[e.b - 1][idx[e.b - 1]];
    const double pab = m.edge_joints.at(e)(idx[e.a - 1], idx[e.b - 1]);
    if (pab <= 0.0) return 0.0;
    if (pa <= 0.0 || pb <= 0.0) return 0.0;
    prod *= pab / (pa * pb);
  }
  return prod;
}

namespace detail {

// Conditional kernel K(t, u) = P(X_to = u | X_from = t) for adjacent nodes.
inline Table conditional_kernel(const DiscreteTreeModel& m, int from, int to) {
  const Edge e = make_edge(from, to);
  const Table& joint = m.edge_joints.at(e);
  const int M = m.alphabet_size;
  Table k(M, M);
  for (int t = 0; t < M; ++t) {
    const double denom = m.node_marginals[from - 1][t];
    for (int u = 0; u < M; ++u) {
      const double num = (from == e.a) ? joint(t, u) : joint(u, t);
      k(t, u) = denom > 0.0 ? num / denom : 0.0;
    }
  }
  return k;
}

}  // namespace detail

// Exact pairwise joint p(x_i, x_j) with rows indexing node i. Adjacent pairs
// return the stored table; longer paths chain conditional kernels along the
// tree path, which is exact by the Markov property and avoids enumerating
// the full joint.
inline Table exact_pairwise_joint(const DiscreteTreeModel& m, int i, int j) {
  if (i == j) throw std::invalid_argument("exact_pairwise_joint: i == j");
  const std::vector<int> path = m.tree.path_nodes(i, j);
  const Edge first = make_edge(path[0], path[1]);
  Table acc = m.edge_joints.at(first);
  if (path[0] != first.a) acc = acc.transposed();  // rows = x_i
  const int M = m.alphabet_size;
  for (std::size_t s = 1; s + 1 < path.size(); ++s) {
    const Table k = detail::conditional_kernel(m, path[s], path[s + 1]);
    Table next(M, M, 0.0);
    for (int a = 0; a < M; ++a)
      for (int t = 0; t < M; ++t) {
        const double v = acc(a, t);
        if (v == 0.0) continue;
        for (int u = 0; u < M; ++u) next(a, u) += v * k(t, u);
      }
    acc = std::move(next);
  }
  return acc;
}

// Exact mutual information I(X_i; X_j) in bits.
inline double exact_mutual_information(const DiscreteTreeModel& m, int i, int j) {
  return mutual_information_bits(exact_pairwise_joint(m, i, j));
}

// Draw n i.i.d. configurations. The root (node 1) is drawn from its
// marginal, then children from p(child | parent) in BFS order with
// ascending-neighbor traversal; fixed order plus the explicit seed makes
// the draw reproducible. Any BFS root yields the same distribution.
inline Dataset sample(const DiscreteTreeModel& m, std::int64_t n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample: negative sample count");
  const int p = m.tree.node_count();

  // Fixed traversal: (parent, child) pairs in BFS order from node 1.
  std::vector<std::pair<int, int>> order;
  {
    std::vector<char> seen(p + 1, 0);
    std::queue<int> q;
    q.push(1);
    seen[1] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y : m.tree.neighbors(x))
        if (!seen[y]) {
          seen[y] = 1;
          order.emplace_back(x, y);
          q.push(y);
        }
    }
  }
  std::map<std::pair<int, int>, Table> kernels;
  for (auto [par, ch] : order)
    kernels.emplace(std::make_pair(par, ch), detail::conditional_kernel(m, par, ch));

  Dataset ds;
  ds.node_count = p;
  ds.symbol_values = m.symbol_values;
  ds.cells.resize(static_cast<std::size_t>(n) * p);
  Rng rng(seed);
  std::vector<int> idx(p + 1, 0);
  for (std::int64_t r = 0; r < n; ++r) {
    idx[1] = rng.categorical(m.node_marginals[0]);
    for (auto [par, ch] : order) {
      const Table& k = kernels.at({par, ch});
      idx[ch] = rng.categorical(k.row(idx[par]));
    }
    for (int i = 1; i <= p; ++i)
      ds.value_at(r, i) = m.symbol_values[idx[i]];
  }
  return ds;
}

// Binary model over values {-1,+1} with uniform marginals, parameterized by
// per-edge correlations rho in (-1,1)\{0}. The correlation of any node pair
// is the product of edge correlations along the connecting path.
struct BinaryCorrelationModel {
  Tree tree;
  std::map<Edge, double> edge_correlations;
};

inline BinaryCorrelationModel make_binary_model(Tree tree, std::span<const double> rho) {
  if (static_cast<int>(rho.size()) != tree.node_count() - 1)
    throw std::invalid_argument("make_binary_model: one correlation per edge required");
  BinaryCorrelationModel m{std::move(tree), {}};
  int k = 0;
  for (const Edge& e : m.tree.edges()) {
    const double r = rho[k++];
    if (!(r > -1.0 && r < 1.0) || r == 0.0)
      throw std::invalid_argument("make_binary_model: correlations must lie in (-1,1) \\ {0}");
    m.edge_correlations[e] = r;
  }
  return m;
}

inline BinaryCorrelationModel binary_chain(std::span<const double> rho) {
  return make_binary_model(random_tree(static_cast<int>(rho.size()) + 1,
                                       TreeShape::chain, 0),
                           rho);
}

inline double pairwise_correlation(const BinaryCorrelationModel& m, int i, int j) {
  if (i == j) return 1.0;
  double r = 1.0;
  for (const Edge& e : m.tree.path_edges(i, j)) r *= m.edge_correlations.at(e);
  return r;
}

inline DiscreteTreeModel to_discrete(const BinaryCorrelationModel& m) {
  DiscreteTreeModel d{m.tree, 2, {-1, +1},
                      std::vector<std::vector<double>>(m.tree.node_count(), {0.5, 0.5}),
                      {},
                      false,
                      std::nullopt};
  for (const auto& [e, rho] : m.edge_correlations)
    d.edge_joints.emplace(e, binary_symmetric_joint(rho));
  return d;
}

}  // namespace treelearn
