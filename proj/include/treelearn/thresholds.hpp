#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelearn/channels.hpp"
#include "treelearn/model.hpp"
#include "treelearn/prob.hpp"
#include "treelearn/tree.hpp"

namespace treelearn {

// Feasibility tuple: a tree edge e = (w, wbar) together with a node pair
// (u, ubar), u < ubar, whose connecting path contains e and has at least
// two edges.
struct Ev2Tuple {
  Edge e;
  int u = 0, ubar = 0;
  friend bool operator==(const Ev2Tuple&, const Ev2Tuple&) = default;
  friend auto operator<=>(const Ev2Tuple&, const Ev2Tuple&) = default;
};

inline std::string to_string(const Ev2Tuple& t) {
  return "edge=" + to_string(t.e) + " pair=(" + std::to_string(t.u) + "," +
         std::to_string(t.ubar) + ")";
}

// All feasibility tuples of the tree, sorted by (edge, pair). Empty for
// p < 3, where no path has two or more edges.
inline std::vector<Ev2Tuple> enumerate_ev2(const Tree& tree) {
  std::vector<Ev2Tuple> out;
  const int p = tree.node_count();
  for (int u = 1; u <= p; ++u)
    for (int v = u + 1; v <= p; ++v) {
      const auto path = tree.path_edges(u, v);
      if (path.size() < 2) continue;
      for (const Edge& e : path) out.push_back({e, u, v});
    }
  std::sort(out.begin(), out.end());
  return out;
}

enum class ThresholdMethod { brute_force, local };

inline std::string to_string(ThresholdMethod m) {
  return m == ThresholdMethod::brute_force ? "brute_force" : "local";
}

// Information threshold report. At the reported argmin,
//   value = (1/2) (I(w; wbar) - I(u; ubar)).
struct ThresholdReport {
  double value_bits = 0.0;
  Ev2Tuple argmin;
  ThresholdMethod method = ThresholdMethod::brute_force;
};

namespace detail {

// On-demand cache of pairwise MI values, shared by both search methods so
// their minima are comparable bit-for-bit.
class PairwiseMiCache {
 public:
  PairwiseMiCache(int p, std::function<double(int, int)> compute)
      : p_(p), vals_(static_cast<std::size_t>(p) * p, kUnset), compute_(std::move(compute)) {}

  double operator()(int i, int j) {
    if (i > j) std::swap(i, j);
    double& slot = vals_[static_cast<std::size_t>(i - 1) * p_ + (j - 1)];
    if (slot == kUnset) slot = compute_(i, j);
    return slot;
  }

 private:
  static constexpr double kUnset = -1.0;
  int p_;
  std::vector<double> vals_;
  std::function<double(int, int)> compute_;
};

inline ThresholdReport minimize_over(std::span<const Ev2Tuple> tuples,
                                     PairwiseMiCache& mi, ThresholdMethod method) {
  bool have = false;
  ThresholdReport best;
  best.method = method;
  for (const Ev2Tuple& t : tuples) {
    const double gap = 0.5 * (mi(t.e.a, t.e.b) - mi(t.u, t.ubar));
    // Ties resolve to the lexicographically smallest tuple.
    if (!have || gap < best.value_bits ||
        (gap == best.value_bits && t < best.argmin)) {
      best.value_bits = gap;
      best.argmin = t;
      have = true;
    }
  }
  if (!have) throw std::domain_error("information threshold undefined for p < 3");
  return best;
}

// Candidate tuples of the locality property: for each edge (w, wbar) only
// pairs made of one endpoint and a neighbor of the other endpoint can attain
// the minimum, giving O(sum of degrees) candidates instead of O(p^2) paths.
inline std::vector<Ev2Tuple> local_tuples(const Tree& tree) {
  std::vector<Ev2Tuple> out;
  for (const Edge& e : tree.edges()) {
    for (int x : tree.neighbors(e.b))
      if (x != e.a) out.push_back({e, std::min(e.a, x), std::max(e.a, x)});
    for (int x : tree.neighbors(e.a))
      if (x != e.b) out.push_back({e, std::min(e.b, x), std::max(e.b, x)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// I° = (1/2) min over the feasibility set of (I(X_w; X_wbar) - I(X_u; X_ubar)),
// computed from exact model MIs (a population quantity -- never estimated
// from samples here). `local` restricts the scan via the locality property;
// both methods return the same value.
inline ThresholdReport information_threshold(const DiscreteTreeModel& m,
                                             ThresholdMethod method) {
  if (m.tree.node_count() < 3)
    throw std::domain_error("information threshold undefined for p < 3");
  detail::PairwiseMiCache mi(m.tree.node_count(),
                             [&m](int i, int j) { return exact_mutual_information(m, i, j); });
  const auto tuples = method == ThresholdMethod::brute_force
                          ? enumerate_ev2(m.tree)
                          : detail::local_tuples(m.tree);
  return detail::minimize_over(tuples, mi, method);
}

// Noisy threshold: the same minimization over the hidden tree's feasibility
// set, with exact channel-output MIs. May be negative, in which case the
// raw-data Chow-Liu estimate converges to a wrong tree with probability one.
// Locality does not extend to non-identically distributed noise, so the scan
// is exhaustive.
inline ThresholdReport noisy_information_threshold(const DiscreteTreeModel& m,
                                                   const ChannelSpec& ch) {
  if (m.tree.node_count() < 3)
    throw std::domain_error("information threshold undefined for p < 3");
  detail::PairwiseMiCache mi(m.tree.node_count(),
                             [&](int i, int j) { return exact_noisy_mi(ch, m, i, j); });
  const auto tuples = enumerate_ev2(m.tree);
  return detail::minimize_over(tuples, mi, ThresholdMethod::brute_force);
}

// RI = max over the feasibility set of I(X_u; X_ubar) / I(X_w; X_wbar).
// Strictly below 1 for admissible models.
inline double max_mi_ratio(const DiscreteTreeModel& m) {
  if (m.tree.node_count() < 3)
    throw std::domain_error("max_mi_ratio undefined for p < 3");
  detail::PairwiseMiCache mi(m.tree.node_count(),
                             [&m](int i, int j) { return exact_mutual_information(m, i, j); });
  double best = 0.0;
  for (const Ev2Tuple& t : enumerate_ev2(m.tree))
    best = std::max(best, mi(t.u, t.ubar) / mi(t.e.a, t.e.b));
  return best;
}

// Sufficient condition for raw-data recovery under per-node erasures:
//   (1-q_i)/(1-q_j) in (RI^(1/2), RI^(-1/2)) for all node pairs.
// One-sided: a false answer does not preclude a positive noisy threshold.
inline bool erasure_feasible(const DiscreteTreeModel& m, std::span<const double> q) {
  const int p = m.tree.node_count();
  std::vector<double> qv(p);
  if (q.size() == 1)
    std::fill(qv.begin(), qv.end(), q[0]);
  else if (static_cast<int>(q.size()) == p)
    std::copy(q.begin(), q.end(), qv.begin());
  else
    throw std::invalid_argument("erasure_feasible: q must be scalar or one entry per node");
  for (double v : qv)
    if (!(v >= 0.0 && v < 1.0))
      throw std::invalid_argument("erasure_feasible: q must lie in [0, 1)");
  const double ri = max_mi_ratio(m);
  const double lo = std::sqrt(ri), hi = 1.0 / std::sqrt(ri);
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) {
      const double r = (1.0 - qv[i - 1]) / (1.0 - qv[j - 1]);
      if (!(r > lo && r < hi)) return false;
    }
  return true;
}

// Sufficient condition for raw-data recovery under per-node sign flips:
//   (1-2q_i)/(1-2q_j) in (rho_max, 1/rho_max) for all node pairs,
// with rho_max the largest edge correlation magnitude. Always satisfied for
// identical q. One-sided, as above.
inline bool bsc_feasible(const BinaryCorrelationModel& m, std::span<const double> q) {
  const int p = m.tree.node_count();
  std::vector<double> qv(p);
  if (q.size() == 1)
    std::fill(qv.begin(), qv.end(), q[0]);
  else if (static_cast<int>(q.size()) == p)
    std::copy(q.begin(), q.end(), qv.begin());
  else
    throw std::invalid_argument("bsc_feasible: q must be scalar or one entry per node");
  for (double v : qv)
    if (!(v >= 0.0 && v < 0.5))
      throw std::invalid_argument("bsc_feasible: q must lie in [0, 0.5)");
  double rho_max = 0.0;
  for (const auto& [e, r] : m.edge_correlations) rho_max = std::max(rho_max, std::abs(r));
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) {
      const double r = (1.0 - 2.0 * qv[i - 1]) / (1.0 - 2.0 * qv[j - 1]);
      if (!(r > rho_max && r < 1.0 / rho_max)) return false;
    }
  return true;
}

// Small-noise approximation of the noisy threshold under the shared-q
// symmetric channel (uniform marginals required). The pairwise MI gap obeys
//   gap_Y = (1-q)^2 gap_X
//           - (1-(1-q)^2) [KL(U || p_{w*,wbar*}) - KL(U || p_{u*,ubar*})] + O(q^2),
// with the starred tuple the noiseless argmin and U uniform on the squared
// alphabet; the threshold is half the gap, so the KL difference enters
// halved as well. KL terms are evaluated in nats and converted to bits at
// the boundary. The remainder is O(q^2).
inline double msym_threshold_small_noise_bits(const DiscreteTreeModel& m, double q) {
  if (!(q >= 0.0 && q < 1.0))
    throw std::invalid_argument("msym_threshold_small_noise_bits: q must lie in [0,1)");
  const ThresholdReport base = information_threshold(m, ThresholdMethod::brute_force);
  const Table pw = exact_pairwise_joint(m, base.argmin.e.a, base.argmin.e.b);
  const Table pu = exact_pairwise_joint(m, base.argmin.u, base.argmin.ubar);
  const double delta_kl_bits =
      (kl_uniform_to_nats(pw) - kl_uniform_to_nats(pu)) / kLn2;
  const double keep = (1.0 - q) * (1.0 - q);
  return keep * base.value_bits - (1.0 - keep) * 0.5 * delta_kl_bits;
}

}  // namespace treelearn
