#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"
#include "treelearn/estimation.hpp"
#include "treelearn/model.hpp"

using namespace treelearn;
using Catch::Approx;

namespace {

Dataset two_node_dataset(std::vector<std::pair<int, int>> rows) {
  Dataset ds;
  ds.node_count = 2;
  ds.symbol_values = {1, 2};
  for (auto [a, b] : rows) {
    ds.cells.push_back(a);
    ds.cells.push_back(b);
  }
  return ds;
}

EmpiricalJoint joint_from_counts(std::vector<std::vector<std::int64_t>> counts) {
  EmpiricalJoint ej;
  ej.rows = counts.size();
  ej.cols = counts[0].size();
  ej.row_values.resize(ej.rows);
  ej.col_values.resize(ej.cols);
  for (std::size_t i = 0; i < ej.rows; ++i) ej.row_values[i] = static_cast<int>(i + 1);
  for (std::size_t j = 0; j < ej.cols; ++j) ej.col_values[j] = static_cast<int>(j + 1);
  for (const auto& row : counts)
    for (std::int64_t c : row) {
      ej.counts.push_back(c);
      ej.n += c;
    }
  return ej;
}

}  // namespace

TEST_CASE("empirical pairwise counting") {
  const Dataset ds = two_node_dataset({{1, 1}, {1, 1}, {2, 2}});
  const EmpiricalJoint ej = empirical_pairwise(ds, 1, 2);
  CHECK(ej.n == 3);
  REQUIRE(ej.rows == 2);
  REQUIRE(ej.cols == 2);
  CHECK(ej.at(0, 0) == 2);
  CHECK(ej.at(0, 1) == 0);
  CHECK(ej.at(1, 0) == 0);
  CHECK(ej.at(1, 1) == 1);

  // permuting rows leaves counts unchanged
  const Dataset perm = two_node_dataset({{2, 2}, {1, 1}, {1, 1}});
  const EmpiricalJoint ej2 = empirical_pairwise(perm, 1, 2);
  CHECK(ej2.counts == ej.counts);

  // swapping the nodes transposes the table
  const EmpiricalJoint ejt = empirical_pairwise(ds, 2, 1);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(ejt.at(b, a) == ej.at(a, b));

  Dataset empty;
  empty.node_count = 2;
  CHECK_THROWS_AS(empirical_pairwise(empty, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(empirical_pairwise(ds, 1, 1), std::invalid_argument);
}

TEST_CASE("unobserved declared symbols contribute nothing") {
  Dataset ds = two_node_dataset({{1, 1}, {2, 2}});
  ds.symbol_values = {1, 2, 3};  // symbol 3 never appears
  const EmpiricalJoint ej = empirical_pairwise(ds, 1, 2);
  CHECK(ej.rows == 3);
  CHECK(plugin_mi_bits(ej) == Approx(1.0).margin(1e-12));
}

TEST_CASE("plug-in entropy") {
  const double point[] = {1.0, 0.0, 0.0};
  CHECK(plugin_entropy_bits(point) == 0.0);
  const double uniform4[] = {0.25, 0.25, 0.25, 0.25};
  CHECK(plugin_entropy_bits(uniform4) == Approx(2.0).margin(1e-14));
  const double skew[] = {0.375, 0.125, 0.125, 0.375};
  CHECK(plugin_entropy_bits(skew) == Approx(1.811278).margin(5e-7));
}

TEST_CASE("plug-in mutual information on count tables") {
  CHECK(plugin_mi_bits(joint_from_counts({{1, 1}, {1, 1}})) == 0.0);
  CHECK(plugin_mi_bits(joint_from_counts({{2, 0}, {0, 2}})) == Approx(1.0).margin(1e-14));
  CHECK(plugin_mi_bits(joint_from_counts({{3, 1}, {1, 3}})) ==
        Approx(0.188722).margin(5e-7));
}

TEST_CASE("entropy decomposition identity and nonnegativity on random tables") {
  Rng rng(404);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t r = 2 + rng.below(4), c = 2 + rng.below(4);
    std::vector<std::vector<std::int64_t>> counts(r, std::vector<std::int64_t>(c));
    for (auto& row : counts)
      for (auto& v : row) v = static_cast<std::int64_t>(rng.below(20));
    std::int64_t total = 0;
    for (auto& row : counts)
      for (auto v : row) total += v;
    if (total == 0) counts[0][0] = total = 1;
    const EmpiricalJoint ej = joint_from_counts(counts);

    const Table t = to_probability(ej);
    const double mi = plugin_mi_bits(ej);
    const double decomp = plugin_entropy_bits(t.row_sums()) +
                          plugin_entropy_bits(t.col_sums()) - plugin_entropy_bits(t);
    CHECK(mi >= 0.0);
    CHECK(mi == Approx(decomp).margin(1e-12));
  }
}

TEST_CASE("plug-in MI concentrates (statistical, seeded)") {
  // binary pair with correlation 0.5; |I-hat - I| <= 0.02 bits must hold in
  // at least 95% of 500 independent trials at n = 10^4
  const double rho[] = {0.5};
  const DiscreteTreeModel m = to_discrete(binary_chain(rho));
  const double truth = exact_mutual_information(m, 1, 2);
  int ok = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Dataset ds = sample(m, 10000, trial_seed(2718, 10000, trial));
    const double est = plugin_mi_bits(empirical_pairwise(ds, 1, 2));
    ok += std::abs(est - truth) <= 0.02;
  }
  CHECK(ok >= 475);
}
