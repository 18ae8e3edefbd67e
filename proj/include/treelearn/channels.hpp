#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treelearn/dataset.hpp"
#include "treelearn/model.hpp"
#include "treelearn/prob.hpp"
#include "treelearn/rng.hpp"

namespace treelearn {

// Per-node observation noise. Kernels act independently across nodes and
// samples:
//   identity          -- Y_i = X_i
//   erasure(q_i)      -- Y_i = X_i w.p. 1-q_i, else the erasure symbol M+1
//   binary_symmetric  -- sign flip on {-1,+1} w.p. q_i in [0, 1/2)
//   m_ary_symmetric   -- Y_i uniform over the alphabet w.p. q (one shared q;
//                        no per-node variant is defined for this kernel)
enum class ChannelKind { identity, erasure, binary_symmetric, m_ary_symmetric };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::identity;
  std::vector<double> q;  // per-node, or a single broadcast value

  double node_q(int node, int p) const {
    if (kind == ChannelKind::identity) return 0.0;
    if (q.size() == 1) return q[0];
    if (static_cast<int>(q.size()) != p)
      throw std::invalid_argument("channel: q must be scalar or one entry per node");
    return q[node - 1];
  }
};

inline ChannelSpec identity_channel() { return {ChannelKind::identity, {}}; }

inline void check_channel(const ChannelSpec& ch, int p) {
  if (ch.kind == ChannelKind::identity) return;
  if (ch.kind == ChannelKind::m_ary_symmetric && ch.q.size() != 1)
    throw std::invalid_argument("m-ary symmetric channel takes exactly one shared q");
  if (ch.q.size() != 1 && static_cast<int>(ch.q.size()) != p)
    throw std::invalid_argument("channel: q must be scalar or one entry per node");
  for (double v : ch.q) {
    const double hi = ch.kind == ChannelKind::binary_symmetric ? 0.5 : 1.0;
    if (!(v >= 0.0 && v < hi))
      throw std::invalid_argument("channel: q out of range");
  }
}

inline int erasure_symbol(int alphabet_size) { return alphabet_size + 1; }

// Row-stochastic transition kernel of one node, rows indexing the input
// alphabet and columns the (possibly extended) output alphabet.
struct NodeKernel {
  Table k;
  std::vector<int> output_values;
};

inline NodeKernel channel_kernel(const ChannelSpec& ch, int node, int p,
                                 const std::vector<int>& symbol_values) {
  check_channel(ch, p);
  const int M = static_cast<int>(symbol_values.size());
  const double q = ch.node_q(node, p);
  switch (ch.kind) {
    case ChannelKind::identity: {
      Table k(M, M);
      for (int i = 0; i < M; ++i) k(i, i) = 1.0;
      return {std::move(k), symbol_values};
    }
    case ChannelKind::erasure: {
      const int er = erasure_symbol(M);
      if (std::find(symbol_values.begin(), symbol_values.end(), er) != symbol_values.end())
        throw std::invalid_argument("erasure channel: symbol M+1 collides with the alphabet");
      Table k(M, M + 1);
      for (int i = 0; i < M; ++i) {
        k(i, i) = 1.0 - q;
        k(i, M) = q;
      }
      std::vector<int> out = symbol_values;
      out.push_back(er);
      return {std::move(k), std::move(out)};
    }
    case ChannelKind::binary_symmetric: {
      if (symbol_values != std::vector<int>{-1, +1})
        throw std::invalid_argument("binary symmetric channel requires the alphabet {-1,+1}");
      Table k(2, 2);
      k(0, 0) = k(1, 1) = 1.0 - q;
      k(0, 1) = k(1, 0) = q;
      return {std::move(k), symbol_values};
    }
    case ChannelKind::m_ary_symmetric: {
      Table k(M, M, q / M);
      for (int i = 0; i < M; ++i) k(i, i) += 1.0 - q;
      return {std::move(k), symbol_values};
    }
  }
  throw std::invalid_argument("channel: unknown kind");
}

// Pass a dataset through the channel. Cells are transformed independently,
// scanning rows then nodes, so the output is a pure function of (input,
// seed).
inline Dataset apply(const ChannelSpec& ch, const Dataset& ds, std::uint64_t seed) {
  const int p = ds.node_count;
  check_channel(ch, p);
  Dataset out = ds;
  if (ch.kind == ChannelKind::identity) return out;
  const int M = static_cast<int>(ds.symbol_values.size());
  if (ch.kind == ChannelKind::binary_symmetric &&
      ds.symbol_values != std::vector<int>{-1, +1})
    throw std::invalid_argument("binary symmetric channel requires the alphabet {-1,+1}");
  if (ch.kind == ChannelKind::erasure) {
    const int er = erasure_symbol(M);
    if (std::find(ds.symbol_values.begin(), ds.symbol_values.end(), er) !=
        ds.symbol_values.end())
      throw std::invalid_argument("erasure channel: symbol M+1 collides with the alphabet");
    out.symbol_values.push_back(er);
  }
  Rng rng(seed);
  const std::int64_t n = ds.sample_count();
  for (std::int64_t r = 0; r < n; ++r) {
    for (int i = 1; i <= p; ++i) {
      const double q = ch.node_q(i, p);
      switch (ch.kind) {
        case ChannelKind::identity:
          break;
        case ChannelKind::erasure:
          if (rng.uniform01() < q) out.value_at(r, i) = erasure_symbol(M);
          break;
        case ChannelKind::binary_symmetric:
          if (rng.uniform01() < q) out.value_at(r, i) = -out.value_at(r, i);
          break;
        case ChannelKind::m_ary_symmetric:
          if (rng.uniform01() < q)
            out.value_at(r, i) =
                ds.symbol_values[static_cast<std::size_t>(rng.below(M))];
          break;
      }
    }
  }
  return out;
}

struct NoisyPairJoint {
  Table table;  // rows index Y_i, columns Y_j
  std::vector<int> row_values, col_values;
};

// Exact joint of the channel outputs (Y_i, Y_j):
//   p'(y_i, y_j) = sum_{x_i, x_j} K_i(y_i | x_i) K_j(y_j | x_j) p(x_i, x_j).
inline NoisyPairJoint exact_noisy_pairwise_joint(const ChannelSpec& ch,
                                                 const DiscreteTreeModel& m, int i,
                                                 int j) {
  if (i == j) throw std::invalid_argument("exact_noisy_pairwise_joint: i == j");
  const int p = m.tree.node_count();
  const Table px = exact_pairwise_joint(m, i, j);
  const NodeKernel ki = channel_kernel(ch, i, p, m.symbol_values);
  const NodeKernel kj = channel_kernel(ch, j, p, m.symbol_values);
  const std::size_t oi = ki.output_values.size(), oj = kj.output_values.size();
  Table out(oi, oj, 0.0);
  const int M = m.alphabet_size;
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      const double v = px(a, b);
      if (v == 0.0) continue;
      for (std::size_t ya = 0; ya < oi; ++ya) {
        const double kia = ki.k(a, ya);
        if (kia == 0.0) continue;
        for (std::size_t yb = 0; yb < oj; ++yb)
          out(ya, yb) += kia * kj.k(b, yb) * v;
      }
    }
  return {std::move(out), ki.output_values, kj.output_values};
}

// Exact I(Y_i; Y_j) in bits.
inline double exact_noisy_mi(const ChannelSpec& ch, const DiscreteTreeModel& m, int i,
                             int j) {
  return mutual_information_bits(exact_noisy_pairwise_joint(ch, m, i, j).table);
}

using NodePair = std::pair<int, int>;

// Outcome of the information-order-preservation test. When the ordering is
// broken, `witness` holds (P, Q) with I(X_P) > I(X_Q) strictly but
// I(Y_P) <= I(Y_Q).
struct IopResult {
  bool order_preserving = true;
  std::optional<std::pair<NodePair, NodePair>> witness;
};

// Checks that the strict ordering of all pairwise mutual informations of X
// survives the channel. X-side ties within `tie_tol` are skipped (only
// strict inequalities are quantified). Comparisons between a tree edge and
// a node pair whose path contains it are scanned first -- these are the
// ones that decide the sign of the noisy threshold -- followed by all
// remaining pairs of pairs in lexicographic order; the first violation is
// reported.
inline IopResult iop_check(const DiscreteTreeModel& m, const ChannelSpec& ch,
                           double tie_tol = 1e-12) {
  const int p = m.tree.node_count();
  std::vector<NodePair> pairs;
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) pairs.emplace_back(i, j);
  const std::size_t np = pairs.size();
  auto pair_index = [p](const NodePair& pr) {
    // row-major index of (i,j), i<j, in the lexicographic pair list
    const int i = pr.first, j = pr.second;
    return static_cast<std::size_t>((i - 1) * p - i * (i + 1) / 2 + j - 1);
  };
  std::vector<double> mi_x(np), mi_y(np);
  for (std::size_t k = 0; k < np; ++k) {
    mi_x[k] = exact_mutual_information(m, pairs[k].first, pairs[k].second);
    mi_y[k] = exact_noisy_mi(ch, m, pairs[k].first, pairs[k].second);
  }
  auto check = [&](std::size_t a, std::size_t b) -> std::optional<std::pair<NodePair, NodePair>> {
    if (std::abs(mi_x[a] - mi_x[b]) <= tie_tol) return std::nullopt;
    const std::size_t hi = mi_x[a] > mi_x[b] ? a : b;
    const std::size_t lo = hi == a ? b : a;
    if (!(mi_y[hi] > mi_y[lo])) return {{pairs[hi], pairs[lo]}};
    return std::nullopt;
  };
  std::vector<char> done(np * np, 0);
  // Edge-versus-path comparisons first.
  for (const Edge& e : m.tree.edges()) {
    const std::size_t ei = pair_index({e.a, e.b});
    for (const NodePair& uv : pairs) {
      if (uv == NodePair{e.a, e.b}) continue;
      const auto pe = m.tree.path_edges(uv.first, uv.second);
      if (pe.size() < 2 || std::find(pe.begin(), pe.end(), e) == pe.end()) continue;
      const std::size_t ui = pair_index(uv);
      if (done[ei * np + ui]) continue;
      done[ei * np + ui] = done[ui * np + ei] = 1;
      if (auto w = check(ei, ui)) return {false, w};
    }
  }
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = a + 1; b < np; ++b) {
      if (done[a * np + b]) continue;
      if (auto w = check(a, b)) return {false, w};
    }
  return {true, std::nullopt};
}

// Corrected pairwise correlation matrix for sign-flip noise with known
// per-node flip probabilities:
//   rho'_{ij} = (1/n sum_k y_ki y_kj) / ((1-2q_i)(1-2q_j)),
// clamped into [-1+1e-9, 1-1e-9] so the downstream MI conversion stays
// finite. Dividing the observed correlations is equivalent to rescaling
// each sample by 1/(1-2q_i) and keeps the data integral.
inline std::vector<std::vector<double>> preprocess_binary_correlations(
    const Dataset& ds, std::span<const double> q) {
  const int p = ds.node_count;
  const std::int64_t n = ds.sample_count();
  if (n < 1) throw std::invalid_argument("preprocess: empty dataset");
  std::vector<double> qv(p);
  if (q.size() == 1)
    std::fill(qv.begin(), qv.end(), q[0]);
  else if (static_cast<int>(q.size()) == p)
    std::copy(q.begin(), q.end(), qv.begin());
  else
    throw std::invalid_argument("preprocess: q must be scalar or one entry per node");
  for (double v : qv)
    if (!(v >= 0.0 && v < 0.5))
      throw std::invalid_argument("preprocess: q must lie in [0, 0.5) (channel invertible)");
  for (const std::int32_t c : ds.cells)
    if (c != -1 && c != 1)
      throw std::invalid_argument("preprocess: dataset must be over {-1,+1}");

  constexpr double kClamp = 1.0 - 1e-9;
  std::vector<std::vector<double>> rho(p, std::vector<double>(p, 1.0));
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) {
      std::int64_t s = 0;
      for (std::int64_t r = 0; r < n; ++r)
        s += static_cast<std::int64_t>(ds.value_at(r, i)) * ds.value_at(r, j);
      double v = static_cast<double>(s) / static_cast<double>(n);
      v /= (1.0 - 2.0 * qv[i - 1]) * (1.0 - 2.0 * qv[j - 1]);
      v = std::clamp(v, -kClamp, kClamp);
      rho[i - 1][j - 1] = rho[j - 1][i - 1] = v;
    }
  return rho;
}

}  // namespace treelearn
