#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace treelearn {

inline constexpr double kLn2 = 0.69314718055994530941723212145818;

// x * ln x with the 0 log 0 = 0 convention.
inline double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Dense row-major table of nonnegative reals (probabilities or counts).
class Table {
 public:
  Table() = default;
  Table(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  double sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
  }

  std::vector<double> row_sums() const {
    std::vector<double> r(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j);
    return r;
  }

  std::vector<double> col_sums() const {
    std::vector<double> c(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) c[j] += (*this)(i, j);
    return c;
  }

  Table transposed() const {
    Table t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Table& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Shannon entropy in bits; 0 log 0 = 0.
inline double entropy_bits(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s -= xlnx(v);
  return s / kLn2;
}

inline double entropy_bits(const Table& t) { return entropy_bits(t.data()); }

// Mutual information in bits of a joint table (KL of the joint from the
// product of its own marginals). Clamped at zero against rounding.
inline double mutual_information_bits(const Table& joint) {
  const std::vector<double> r = joint.row_sums();
  const std::vector<double> c = joint.col_sums();
  double s = 0.0;
  for (std::size_t i = 0; i < joint.rows(); ++i)
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      const double p = joint(i, j);
      if (p > 0.0) s += p * std::log(p / (r[i] * c[j]));
    }
  s /= kLn2;
  return s > 0.0 ? s : 0.0;
}

// KL(a || b) in nats over tables of identical shape. Returns +inf when a
// puts mass where b does not.
inline double kl_nats(const Table& a, const Table& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("kl_nats: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double pa = a(i, j), pb = b(i, j);
      if (pa > 0.0) {
        if (pb <= 0.0) return std::numeric_limits<double>::infinity();
        s += pa * std::log(pa / pb);
      }
    }
  return s;
}

// KL(U || p) in nats, U uniform over the cells of p.
inline double kl_uniform_to_nats(const Table& p) {
  const double u = 1.0 / static_cast<double>(p.rows() * p.cols());
  double s = 0.0;
  for (double v : p.data()) {
    if (v <= 0.0) return std::numeric_limits<double>::infinity();
    s += u * std::log(u / v);
  }
  return s;
}

// Mutual information in bits of a pair of +/-1 variables with uniform
// marginals and correlation rho:
//   I = (1/2) log2( (1-rho)^(1-rho) (1+rho)^(1+rho) ).
inline double binary_mi_bits(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0))
    throw std::invalid_argument("binary_mi_bits: rho outside [-1, 1]");
  return (xlnx(1.0 - rho) + xlnx(1.0 + rho)) / (2.0 * kLn2);
}

// E[V W] for a joint over integer-valued symbols.
inline double correlation(const Table& joint, std::span<const int> row_values,
                          std::span<const int> col_values) {
  if (joint.rows() != row_values.size() || joint.cols() != col_values.size())
    throw std::invalid_argument("correlation: value list does not match table shape");
  double s = 0.0;
  for (std::size_t i = 0; i < joint.rows(); ++i)
    for (std::size_t j = 0; j < joint.cols(); ++j)
      s += joint(i, j) * row_values[i] * col_values[j];
  return s;
}

// 2x2 joint over values (-1, +1) with uniform marginals and correlation rho.
inline Table binary_symmetric_joint(double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("binary_symmetric_joint: |rho| must be < 1");
  Table t(2, 2);
  t(0, 0) = t(1, 1) = (1.0 + rho) / 4.0;
  t(0, 1) = t(1, 0) = (1.0 - rho) / 4.0;
  return t;
}

}  // namespace treelearn
