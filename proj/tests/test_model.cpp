#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "test_support.hpp"
#include "treelearn/estimation.hpp"
#include "treelearn/model.hpp"
#include "treelearn/model_io.hpp"

using namespace treelearn;
using testsupport::random_binary_model;
using testsupport::random_discrete_model;
using Catch::Approx;

namespace {

// Brute-force joint over all M^p configurations (values).
std::map<std::vector<int>, double> enumerate_joint(const DiscreteTreeModel& m) {
  const int p = m.tree.node_count();
  const int M = m.alphabet_size;
  std::map<std::vector<int>, double> out;
  std::vector<int> idx(p, 0);
  for (;;) {
    std::vector<int> x(p);
    for (int i = 0; i < p; ++i) x[i] = m.symbol_values[idx[i]];
    out[x] = joint_probability(m, x);
    int k = 0;
    while (k < p && ++idx[k] == M) idx[k++] = 0;
    if (k == p) break;
  }
  return out;
}

DiscreteTreeModel independent_uniform(int p, int M) {
  DiscreteTreeModel m{random_tree(p, TreeShape::chain, 0),
                      M,
                      default_symbols(M),
                      std::vector<std::vector<double>>(p, std::vector<double>(M, 1.0 / M)),
                      {},
                      false,
                      std::nullopt};
  for (const Edge& e : m.tree.edges())
    m.edge_joints.emplace(e, Table(M, M, 1.0 / (static_cast<double>(M) * M)));
  return m;
}

}  // namespace

TEST_CASE("joint probability: independent uniform model") {
  const DiscreteTreeModel m = independent_uniform(3, 2);
  for (const auto& [x, prob] : enumerate_joint(m)) CHECK(prob == Approx(0.125).margin(1e-15));
}

TEST_CASE("joint probability: binary chain example and normalization") {
  const double rho[] = {0.5, 0.8};
  const DiscreteTreeModel m = to_discrete(binary_chain(rho));
  const int plus[] = {1, 1, 1};
  CHECK(joint_probability(m, plus) == Approx(0.3375).epsilon(1e-12));

  // enumerate and verify both normalization and agreement with the
  // edge-joint products p(a,b) = (1 + rho a b)/4
  double total = 0.0;
  for (const auto& [x, prob] : enumerate_joint(m)) {
    const double expected = 0.5 * ((1.0 + 0.5 * x[0] * x[1]) / 2.0) *
                            ((1.0 + 0.8 * x[1] * x[2]) / 2.0);
    CHECK(prob == Approx(expected).margin(1e-14));
    total += prob;
  }
  CHECK(total == Approx(1.0).margin(1e-10));
}

TEST_CASE("joint probability rejects out-of-alphabet symbols") {
  const DiscreteTreeModel m = independent_uniform(3, 2);
  const int bad[] = {1, 2, 7};
  CHECK_THROWS_AS(joint_probability(m, bad), std::invalid_argument);
}

TEST_CASE("full joint sums to one on random models") {
  Rng rng(2024);
  for (int rep = 0; rep < 20; ++rep) {
    const int p = 3 + static_cast<int>(rng.below(3));
    const int M = 2 + static_cast<int>(rng.below(2));
    const DiscreteTreeModel m = random_discrete_model(rng, p, M);
    REQUIRE(validate(m).empty());
    double total = 0.0;
    for (const auto& [x, prob] : enumerate_joint(m)) total += prob;
    CHECK(total == Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("exact pairwise joint: adjacent pairs return the stored table") {
  Rng rng(5);
  const DiscreteTreeModel m = random_discrete_model(rng, 5, 3);
  for (const Edge& e : m.tree.edges()) {
    CHECK(exact_pairwise_joint(m, e.a, e.b) == m.edge_joints.at(e));
    CHECK(exact_pairwise_joint(m, e.b, e.a) == m.edge_joints.at(e).transposed());
  }
  CHECK_THROWS_AS(exact_pairwise_joint(m, 2, 2), std::invalid_argument);
}

TEST_CASE("exact pairwise joint: chained correlation on a binary chain") {
  const double rho[] = {0.5, 0.8};
  const DiscreteTreeModel m = to_discrete(binary_chain(rho));
  const Table j13 = exact_pairwise_joint(m, 1, 3);
  const int vals[] = {-1, +1};
  CHECK(correlation(j13, vals, vals) == Approx(0.4).margin(1e-14));
}

TEST_CASE("exact pairwise joint matches brute-force marginalization") {
  Rng rng(77);
  for (int rep = 0; rep < 8; ++rep) {
    const int p = 4 + static_cast<int>(rng.below(3));  // 4..6
    const int M = 2 + static_cast<int>(rng.below(2));  // 2..3
    const DiscreteTreeModel m = random_discrete_model(rng, p, M);
    const auto joint = enumerate_joint(m);
    for (int i = 1; i <= p; ++i)
      for (int j = 1; j <= p; ++j) {
        if (i == j) continue;
        Table expect(M, M, 0.0);
        for (const auto& [x, prob] : joint)
          expect(m.symbol_index(x[i - 1]), m.symbol_index(x[j - 1])) += prob;
        const Table got = exact_pairwise_joint(m, i, j);
        for (int a = 0; a < M; ++a)
          for (int b = 0; b < M; ++b)
            CHECK(got(a, b) == Approx(expect(a, b)).margin(1e-12));
      }
  }
}

TEST_CASE("exact mutual information on binary pairs") {
  const double rho0[] = {1e-300, 0.5};  // placeholder edge; test uses direct pairs
  (void)rho0;
  const double rho_a[] = {0.5};
  CHECK(exact_mutual_information(to_discrete(binary_chain(rho_a)), 1, 2) ==
        Approx(0.188722).margin(5e-7));
  const double rho_b[] = {0.9};
  CHECK(exact_mutual_information(to_discrete(binary_chain(rho_b)), 1, 2) ==
        Approx(0.713603).margin(5e-7));
  CHECK(binary_mi_bits(0.0) == 0.0);
  // closed form agrees with the generic table route to double precision
  for (double r : {0.1, 0.35, 0.5, 0.77, 0.9, 0.999}) {
    CHECK(binary_mi_bits(r) ==
          Approx(mutual_information_bits(binary_symmetric_joint(r))).margin(1e-13));
  }
}

TEST_CASE("binary correlation decay along paths") {
  Rng rng(31337);
  for (int rep = 0; rep < 10; ++rep) {
    const BinaryCorrelationModel bm = random_binary_model(rng, 8);
    const DiscreteTreeModel m = to_discrete(bm);
    const int vals[] = {-1, +1};
    for (int i = 1; i <= 8; ++i)
      for (int j = i + 1; j <= 8; ++j) {
        const double via_joint = correlation(exact_pairwise_joint(m, i, j), vals, vals);
        CHECK(via_joint == Approx(pairwise_correlation(bm, i, j)).margin(1e-12));
      }
  }
}

TEST_CASE("validate: well-formed, zero-MI edge, inconsistent marginal") {
  Rng rng(9);
  DiscreteTreeModel good = random_discrete_model(rng, 4, 2);
  CHECK(validate(good).empty());

  DiscreteTreeModel zero_mi = independent_uniform(3, 2);  // product joints
  const auto report = validate(zero_mi);
  REQUIRE_FALSE(report.empty());
  bool flagged = false;
  for (const auto& line : report) flagged |= line.find("zero mutual information") != std::string::npos;
  CHECK(flagged);

  DiscreteTreeModel skewed = good;
  skewed.node_marginals[0][0] += 0.01;
  skewed.node_marginals[0][1] -= 0.01;
  bool consistency = false;
  for (const auto& line : validate(skewed))
    consistency |= line.find("inconsistent") != std::string::npos;
  CHECK(consistency);
}

TEST_CASE("validate: deterministic edges rejected unless allowed") {
  DiscreteTreeModel m = independent_uniform(2, 2);
  Table det(2, 2, 0.0);
  det(0, 0) = det(1, 1) = 0.5;
  m.edge_joints.at({1, 2}) = det;
  REQUIRE_FALSE(validate(m).empty());
  m.allow_degenerate_edges = true;
  CHECK(validate(m).empty());
}

TEST_CASE("sampling: n = 0, determinism, strong-correlation check") {
  const double rho[] = {0.999, 0.999};
  const DiscreteTreeModel m = to_discrete(binary_chain(rho));
  CHECK(sample(m, 0, 1).sample_count() == 0);
  const Dataset a = sample(m, 50, 11), b = sample(m, 50, 11);
  CHECK(a.cells == b.cells);

  const Dataset ds = sample(m, 1000, 4242);
  double corr = 0.0;
  for (std::int64_t r = 0; r < ds.sample_count(); ++r)
    corr += ds.value_at(r, 1) * ds.value_at(r, 2);
  corr /= static_cast<double>(ds.sample_count());
  CHECK(std::abs(corr - 0.999) < 0.05);
}

TEST_CASE("sampling: independent model has near-zero empirical MI") {
  const DiscreteTreeModel m = independent_uniform(3, 2);
  const Dataset ds = sample(m, 100000, 7);
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      CHECK(plugin_mi_bits(empirical_pairwise(ds, i, j)) < 0.01);
}

TEST_CASE("sampling: empirical pairwise joints converge in total variation") {
  const double rho[] = {0.6, -0.4, 0.7};
  const DiscreteTreeModel m = to_discrete(binary_chain(rho));
  const Dataset ds = sample(m, 100000, 99);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      const Table exact = exact_pairwise_joint(m, i, j);
      const Table emp = to_probability(empirical_pairwise(ds, i, j));
      REQUIRE(emp.rows() == 2);
      double tv = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) tv += std::abs(exact(a, b) - emp(a, b));
      CHECK(tv / 2.0 < 0.02);
    }
}

TEST_CASE("model serialization round-trips byte for byte") {
  Rng rng(123);
  const DiscreteTreeModel m = random_discrete_model(rng, 5, 3);
  const std::string text = save_model_text(m);
  const DiscreteTreeModel back = load_model_text(text);
  CHECK(save_model_text(back) == text);
  CHECK(back.tree == m.tree);
  CHECK(back.node_marginals == m.node_marginals);
  for (const Edge& e : m.tree.edges())
    CHECK(back.edge_joints.at(e) == m.edge_joints.at(e));
}

TEST_CASE("binary correlation model rejects out-of-range correlations") {
  const double bad1[] = {0.0, 0.5};
  CHECK_THROWS_AS(binary_chain(bad1), std::invalid_argument);
  const double bad2[] = {1.0, 0.5};
  CHECK_THROWS_AS(binary_chain(bad2), std::invalid_argument);
}
