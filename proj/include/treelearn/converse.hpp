#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "treelearn/model.hpp"
#include "treelearn/prob.hpp"
#include "treelearn/thresholds.hpp"
#include "treelearn/tree.hpp"

namespace treelearn {

// ---------------------------------------------------------------------------
// Minimax (Fano) model family: a base Markov chain M0 on an odd number of
// nodes, with uniform node marginals, whose edge joints alternate between a
// strong table A = p(x_1, x_2) on edges (k, k+1) with k odd and a weak table
// B = p(x_2, x_3) on edges with k even, subject to 0 < I(B) < I(A). For each
// even i, the alternative M_i replaces edge (i, i+1) with (i-1, i+1), giving
// the new edge the pairwise marginal M0 assigns to that node pair; all other
// pairwise joints coincide with M0's. The interpolation index ell pulls the
// weak joints toward independence,
//   B^ell = (1 - 2^-ell) U + 2^-ell B,   U uniform on the squared alphabet,
// which drives every pairwise KL between family members -- and every
// member's information threshold -- to zero while keeping them positive at
// each finite ell. Any other sequence with the same limit would do.
//
// All KL and Fano quantities in this module are in nats.
// ---------------------------------------------------------------------------

struct FanoFamily {
  int p = 0;
  int M = 0;
  int ell = 0;
  Table joint_strong;                         // A
  Table joint_weak;                           // B^ell
  DiscreteTreeModel base;                     // M0
  std::vector<int> replaced;                  // even i, one per alternative
  std::vector<DiscreteTreeModel> alternatives;// M_i, same order as `replaced`
};

namespace detail {

inline bool uniform_marginals(const Table& t, double tol = 1e-12) {
  const double u = 1.0 / static_cast<double>(t.rows());
  for (double v : t.row_sums())
    if (std::abs(v - u) > tol) return false;
  for (double v : t.col_sums())
    if (std::abs(v - u) > tol) return false;
  return true;
}

}  // namespace detail

inline FanoFamily build_fano_family(int p, int M, const Table& joint_a,
                                    const Table& joint_b, int ell) {
  if (p < 5 || p % 2 == 0)
    throw std::invalid_argument("build_fano_family: p must be odd and >= 5");
  if (M < 2) throw std::invalid_argument("build_fano_family: M must be >= 2");
  if (ell < 0) throw std::invalid_argument("build_fano_family: ell must be >= 0");
  const auto sz = static_cast<std::size_t>(M);
  if (joint_a.rows() != sz || joint_a.cols() != sz || joint_b.rows() != sz ||
      joint_b.cols() != sz)
    throw std::invalid_argument("build_fano_family: joints must be M x M");
  if (!detail::uniform_marginals(joint_a) || !detail::uniform_marginals(joint_b))
    throw std::invalid_argument("build_fano_family: joints must have uniform marginals");

  const double mix = std::ldexp(1.0, -ell);  // 2^-ell
  Table weak(sz, sz);
  const double u2 = 1.0 / static_cast<double>(M) / static_cast<double>(M);
  for (std::size_t i = 0; i < sz; ++i)
    for (std::size_t j = 0; j < sz; ++j)
      weak(i, j) = (1.0 - mix) * u2 + mix * joint_b(i, j);

  const double mi_a = mutual_information_bits(joint_a);
  const double mi_b = mutual_information_bits(weak);
  if (!(mi_b > 0.0 && mi_b < mi_a))
    throw std::invalid_argument(
        "build_fano_family: need 0 < I(weak) < I(strong) after interpolation");

  FanoFamily fam;
  fam.p = p;
  fam.M = M;
  fam.ell = ell;
  fam.joint_strong = joint_a;
  fam.joint_weak = weak;

  const std::vector<double> unif(sz, 1.0 / static_cast<double>(M));
  DiscreteTreeModel m0{random_tree(p, TreeShape::chain, 0),
                       M,
                       default_symbols(M),
                       std::vector<std::vector<double>>(p, unif),
                       {},
                       false,
                       std::nullopt};
  for (int k = 1; k < p; ++k)
    m0.edge_joints.emplace(Edge{k, k + 1}, (k % 2 == 1) ? joint_a : weak);
  fam.base = m0;

  for (int i = 2; i <= p - 1; i += 2) {
    std::vector<Edge> edges;
    for (int k = 1; k < p; ++k)
      if (k != i) edges.push_back({k, k + 1});
    edges.push_back({i - 1, i + 1});
    DiscreteTreeModel mi{Tree(p, std::move(edges)),
                         M,
                         default_symbols(M),
                         std::vector<std::vector<double>>(p, unif),
                         {},
                         false,
                         std::nullopt};
    for (const Edge& e : mi.tree.edges()) {
      if (e == Edge{i - 1, i + 1})
        mi.edge_joints.emplace(e, exact_pairwise_joint(m0, i - 1, i + 1));
      else
        mi.edge_joints.emplace(e, m0.edge_joints.at(e));
    }
    fam.replaced.push_back(i);
    fam.alternatives.push_back(std::move(mi));
  }
  return fam;
}

inline constexpr double kKlEnumerationCap = 1e7;

// Exact KL(a || b) in nats by enumerating all M^p configurations of the full
// joint. Capped at M^p <= 1e7; beyond that only the closed forms below are
// available.
inline double kl_between_models_nats(const DiscreteTreeModel& a,
                                     const DiscreteTreeModel& b) {
  const int p = a.tree.node_count();
  const int M = a.alphabet_size;
  if (b.tree.node_count() != p || b.alphabet_size != M ||
      a.symbol_values != b.symbol_values)
    throw std::invalid_argument("kl_between_models_nats: models not comparable");
  if (std::pow(static_cast<double>(M), p) > kKlEnumerationCap)
    throw std::length_error("kl_between_models_nats: M^p exceeds the enumeration cap");

  std::vector<int> x(p, 0);  // configuration as symbol values
  std::vector<int> idx(p, 0);
  double kl = 0.0;
  for (;;) {
    for (int i = 0; i < p; ++i) x[i] = a.symbol_values[idx[i]];
    const double pa = joint_probability(a, x);
    if (pa > 0.0) {
      const double pb = joint_probability(b, x);
      if (pb <= 0.0) return std::numeric_limits<double>::infinity();
      kl += pa * std::log(pa / pb);
    }
    int k = 0;
    while (k < p && ++idx[k] == M) idx[k++] = 0;
    if (k == p) break;
  }
  return kl;
}

// Closed form for KL(M0 || M_i) in nats:
//   D = I_M0(X_{i+1}; X_i) - I_M0(X_{i+1}; X_{i-1}).
inline double kl_m0_to_mi_closed_nats(const FanoFamily& fam, int i) {
  return (exact_mutual_information(fam.base, i, i + 1) -
          exact_mutual_information(fam.base, i - 1, i + 1)) *
         kLn2;
}

// Closed form for KL(M_i || M0) in nats:
//   D = 2 I°_{M_i} + KL( p_{M_i}(x_i, x_{i+1}) || p_{M0}(x_i, x_{i+1}) ).
inline double kl_mi_to_m0_closed_nats(const FanoFamily& fam, int i) {
  const DiscreteTreeModel* mi = nullptr;
  for (std::size_t k = 0; k < fam.replaced.size(); ++k)
    if (fam.replaced[k] == i) mi = &fam.alternatives[k];
  if (!mi) throw std::invalid_argument("kl_mi_to_m0_closed_nats: no such family member");
  const double ith_nats =
      information_threshold(*mi, ThresholdMethod::brute_force).value_bits * kLn2;
  const Table displaced = exact_pairwise_joint(*mi, i, i + 1);
  return 2.0 * ith_nats + kl_nats(displaced, fam.joint_weak);
}

// Largest sample size for which the minimax probability of incorrect
// recovery over models with threshold at most eta is still >= 1/2:
// every n < (ln((p+1)/2) - 2) / (4 eta) qualifies, so
//   n_max = ceil(x) - 1 floored at 0. Natural logarithm (Fano convention).
inline std::uint64_t fano_sample_bound(int p, double eta) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("fano_sample_bound: p must be odd and >= 3");
  if (!(eta > 0.0)) throw std::invalid_argument("fano_sample_bound: eta must be > 0");
  const double x = (std::log((p + 1) / 2.0) - 2.0) / (4.0 * eta);
  if (!(x > 0.0)) return 0;
  return static_cast<std::uint64_t>(std::ceil(x)) - 1;
}

}  // namespace treelearn
