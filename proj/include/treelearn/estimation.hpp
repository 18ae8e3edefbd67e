#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "treelearn/dataset.hpp"
#include "treelearn/prob.hpp"

namespace treelearn {

// Pairwise count table. Axes index the declared alphabet plus whatever
// symbols were actually observed; unobserved declared symbols carry zero
// counts and contribute 0 log 0 = 0 to the plug-in estimators.
struct EmpiricalJoint {
  std::vector<std::int64_t> counts;  // row-major, rows x cols
  std::size_t rows = 0, cols = 0;
  std::int64_t n = 0;
  std::vector<int> row_values, col_values;

  std::int64_t at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
};

inline EmpiricalJoint empirical_pairwise(const Dataset& ds, int i, int j) {
  if (i == j) throw std::invalid_argument("empirical_pairwise: i == j");
  if (i < 1 || j < 1 || i > ds.node_count || j > ds.node_count)
    throw std::invalid_argument("empirical_pairwise: node out of range");
  const std::int64_t n = ds.sample_count();
  if (n < 1) throw std::invalid_argument("empirical_pairwise: empty dataset");

  std::set<int> row_set(ds.symbol_values.begin(), ds.symbol_values.end());
  std::set<int> col_set = row_set;
  for (std::int64_t r = 0; r < n; ++r) {
    row_set.insert(ds.value_at(r, i));
    col_set.insert(ds.value_at(r, j));
  }
  EmpiricalJoint ej;
  ej.row_values.assign(row_set.begin(), row_set.end());
  ej.col_values.assign(col_set.begin(), col_set.end());
  ej.rows = ej.row_values.size();
  ej.cols = ej.col_values.size();
  ej.n = n;
  ej.counts.assign(ej.rows * ej.cols, 0);
  auto index_of = [](const std::vector<int>& vals, int v) {
    return static_cast<std::size_t>(
        std::lower_bound(vals.begin(), vals.end(), v) - vals.begin());
  };
  for (std::int64_t r = 0; r < n; ++r) {
    const std::size_t a = index_of(ej.row_values, ds.value_at(r, i));
    const std::size_t b = index_of(ej.col_values, ds.value_at(r, j));
    ++ej.counts[a * ej.cols + b];
  }
  return ej;
}

inline Table to_probability(const EmpiricalJoint& ej) {
  Table t(ej.rows, ej.cols);
  const double inv = 1.0 / static_cast<double>(ej.n);
  for (std::size_t i = 0; i < ej.rows; ++i)
    for (std::size_t j = 0; j < ej.cols; ++j)
      t(i, j) = static_cast<double>(ej.at(i, j)) * inv;
  return t;
}

// Plug-in entropy in bits: -sum p log2 p, no bias correction.
inline double plugin_entropy_bits(std::span<const double> dist) {
  return entropy_bits(dist);
}
inline double plugin_entropy_bits(const Table& dist) { return entropy_bits(dist); }

// Plug-in mutual information in bits,
//   I-hat = sum_{l,m} p-hat(l,m) log2( p-hat(l,m) / (p-hat(l) p-hat(m)) ).
// Equals H(rows) + H(cols) - H(joint) and is nonnegative; clamped at zero
// against rounding.
inline double plugin_mi_bits(const EmpiricalJoint& ej) {
  std::vector<std::int64_t> row(ej.rows, 0), col(ej.cols, 0);
  for (std::size_t i = 0; i < ej.rows; ++i)
    for (std::size_t j = 0; j < ej.cols; ++j) {
      row[i] += ej.at(i, j);
      col[j] += ej.at(i, j);
    }
  const double n = static_cast<double>(ej.n);
  double s = 0.0;
  for (std::size_t i = 0; i < ej.rows; ++i)
    for (std::size_t j = 0; j < ej.cols; ++j) {
      const double c = static_cast<double>(ej.at(i, j));
      if (c > 0.0)
        s += c / n * std::log((c * n) / (static_cast<double>(row[i]) * col[j]));
    }
  s /= kLn2;
  return s > 0.0 ? s : 0.0;
}

}  // namespace treelearn
