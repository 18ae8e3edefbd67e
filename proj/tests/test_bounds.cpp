#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "treelearn/bounds.hpp"
#include "treelearn/rng.hpp"

using namespace treelearn;
using Catch::Approx;

namespace {

BoundQuery finite_query(double thr, double C, int p, double delta,
                        BoundForm form = BoundForm::theorem) {
  BoundQuery q;
  q.regime = BoundRegime::finite_alphabet;
  q.threshold_bits = thr;
  q.explicit_C = C;
  q.p = p;
  q.delta = delta;
  q.form = form;
  return q;
}

bool predicate_finite(const BoundQuery& q, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  const double b = *q.explicit_C / std::sqrt(nd);
  const double side = q.threshold_bits - b;
  if (side <= 0.0) return false;
  const double l2 = std::log2(nd);
  return nd / (l2 * l2) >= 72.0 * std::log(q.p / q.delta) / (side * side);
}

}  // namespace

TEST_CASE("bias constant: golden value and dual-method agreement") {
  const BiasConstantResult r = bias_constant({1.5, 0.5, 1.0});
  // frozen from an independent quadrature oracle (equals 9 + 24 * 2^(1/3))
  CHECK(r.value == Approx(39.238105197476955).epsilon(1e-9));
  CHECK(r.integral_quadrature ==
        Approx(r.integral_closed_form).epsilon(1e-9));

  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const double c = 1.1 + 0.8 * rng.uniform01();
    const double c1 = 0.1 + 0.9 * rng.uniform01();
    const BiasConstantResult rr = bias_constant({c, c1, c1 + rng.uniform01()});
    CHECK(rr.integral_quadrature ==
          Approx(rr.integral_closed_form).epsilon(1e-9));
    CHECK(rr.value > 0.0);
  }
}

TEST_CASE("bias constant grows monotonically as c drops toward 1") {
  double prev = 0.0;
  for (double c : {1.5, 1.3, 1.2, 1.1, 1.05, 1.02}) {
    const double v = bias_constant({c, 1.0, 1.0}).value;
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 1e3);  // blows up near c = 1
  CHECK_THROWS_AS(bias_constant({2.5, 0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(bias_constant({1.5, 1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("sufficient n: non-positive threshold is infeasible, not an error") {
  const SufficientN r = sufficient_n(finite_query(-0.05, 0.01, 10, 0.05));
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.reason.empty());
  CHECK_THROWS_AS(sufficient_n(finite_query(0.1, 0.01, 10, 1.5)),
                  std::invalid_argument);  // delta outside (0,1)
}

TEST_CASE("sufficient n: worked finite-alphabet query, minimality at n and n-1") {
  const BoundQuery q = finite_query(0.1, 0.01, 10, 0.05);
  const SufficientN r = sufficient_n(q);
  REQUIRE(r.feasible);
  CHECK(predicate_finite(q, r.n));
  CHECK((r.n == 3 || !predicate_finite(q, r.n - 1)));
  CHECK(r.main_lhs >= r.main_rhs);
  CHECK(r.side_margin > 0.0);
}

TEST_CASE("sufficient n: minimality holds across regimes and random queries") {
  Rng rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    BoundQuery q;
    q.threshold_bits = 0.02 + 0.3 * rng.uniform01();
    q.p = 3 + static_cast<int>(rng.below(40));
    q.delta = 0.01 + 0.2 * rng.uniform01();
    q.form = rng.uniform01() < 0.5 ? BoundForm::theorem : BoundForm::proof;
    switch (rep % 4) {
      case 0:
        q.regime = BoundRegime::countable_c_lt2;
        q.tail = TailParams{1.2 + 0.6 * rng.uniform01(), 0.3, 0.8};
        break;
      case 1:
        q.regime = BoundRegime::finite_alphabet;
        q.explicit_C = 0.001 + 0.02 * rng.uniform01();
        break;
      case 2:
        q.regime = BoundRegime::countable_c_ge2;
        q.explicit_C = 0.001 + 0.02 * rng.uniform01();
        break;
      default:
        q.regime = BoundRegime::noisy;
        q.explicit_C = 0.001 + 0.05 * rng.uniform01();
        q.bias_exponent_c = 1.2 + 0.7 * rng.uniform01();
        break;
    }
    const SufficientN r = sufficient_n(q);
    if (!r.feasible) continue;
    CHECK(r.main_lhs >= r.main_rhs);
    CHECK(r.side_margin > 0.0);
    CHECK(bound_inequalities_hold(q, r.n));
    if (r.n > 3) CHECK_FALSE(bound_inequalities_hold(q, r.n - 1));
  }
}

TEST_CASE("sufficient n: monotone in threshold, delta and p") {
  Rng rng(29);
  for (int rep = 0; rep < 50; ++rep) {
    const double thr = 0.02 + 0.2 * rng.uniform01();
    const double C = 0.001 + 0.01 * rng.uniform01();
    const int p = 3 + static_cast<int>(rng.below(30));
    const double delta = 0.02 + 0.2 * rng.uniform01();
    const SufficientN base = sufficient_n(finite_query(thr, C, p, delta));
    REQUIRE(base.feasible);
    const SufficientN stronger = sufficient_n(finite_query(2.0 * thr, C, p, delta));
    REQUIRE(stronger.feasible);
    CHECK(stronger.n <= base.n);
    const SufficientN harder = sufficient_n(finite_query(thr, C, p, delta / 2.0));
    REQUIRE(harder.feasible);
    CHECK(harder.n >= base.n);
    const SufficientN wider = sufficient_n(finite_query(thr, C, 2 * p, delta));
    REQUIRE(wider.feasible);
    CHECK(wider.n >= base.n);
  }
}

TEST_CASE("finite-alphabet regime needs no more samples than the countable one") {
  // at the same explicit C the 1/sqrt(n) bias is pointwise smaller than
  // n^((1-c)/c) for c in (1,2)
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const double thr = 0.05 + 0.2 * rng.uniform01();
    const double C = 0.005 + 0.02 * rng.uniform01();
    BoundQuery countable;
    countable.regime = BoundRegime::countable_c_lt2;
    countable.threshold_bits = thr;
    countable.p = 12;
    countable.delta = 0.05;
    countable.explicit_C = C;
    countable.bias_exponent_c = 1.2 + 0.7 * rng.uniform01();
    const SufficientN nc = sufficient_n(countable);
    const SufficientN nf = sufficient_n(finite_query(thr, C, 12, 0.05));
    REQUIRE(nc.feasible);
    REQUIRE(nf.feasible);
    CHECK(nf.n <= nc.n);
  }
}

TEST_CASE("theorem form is conservative relative to the proof form") {
  // Provable when the bias at the solution is small next to the threshold
  // (the 72 ln(p/delta) vs 2 ln(6 binom(p,2)/delta) slack dominates);
  // queries near the side-condition knee are skipped.
  Rng rng(37);
  int compared = 0;
  for (int rep = 0; rep < 80; ++rep) {
    const double thr = 0.05 + 0.3 * rng.uniform01();
    const double C = 0.001 + 0.004 * rng.uniform01();
    const int p = 3 + static_cast<int>(rng.below(30));
    const double delta = 0.02 + 0.2 * rng.uniform01();
    const SufficientN theorem =
        sufficient_n(finite_query(thr, C, p, delta, BoundForm::theorem));
    const SufficientN proof =
        sufficient_n(finite_query(thr, C, p, delta, BoundForm::proof));
    REQUIRE(theorem.feasible);
    REQUIRE(proof.feasible);
    const double bias_at_sol = C / std::sqrt(static_cast<double>(theorem.n));
    if (bias_at_sol > 0.1 * thr) continue;  // knee region, ordering unproven
    ++compared;
    CHECK(theorem.n >= proof.n);
  }
  CHECK(compared >= 40);
}

TEST_CASE("failure bound: vacuity, decay, and the sufficient-n round trip") {
  const BoundQuery q = finite_query(0.08, 0.01, 3, 0.05);

  // small n: bound at or above one is flagged vacuous
  const FailureBound tiny = failure_probability_bound(3, q);
  CHECK((!tiny.side_condition_ok || tiny.vacuous));

  // beyond the knee the bound decays monotonically and eventually leaves
  // the vacuous region
  double prev = 1e300;
  for (std::uint64_t n : {2000, 20000, 200000, 2000000, 20000000}) {
    const FailureBound fb = failure_probability_bound(n, q);
    REQUIRE(fb.side_condition_ok);
    CHECK(fb.value < prev);
    prev = fb.value;
  }
  CHECK(prev < 1.0);

  // side condition violated -> vacuous-bound result, no exception
  const FailureBound bad = failure_probability_bound(
      3, finite_query(0.001, 10.0, 3, 0.05));
  CHECK_FALSE(bad.side_condition_ok);

  // theorem-form sufficient n is conservative: the proof-form bound at the
  // returned n is at most the requested delta (away from the knee)
  Rng rng(41);
  int compared = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const double thr = 0.05 + 0.3 * rng.uniform01();
    const double C = 0.001 + 0.004 * rng.uniform01();
    const int p = 3 + static_cast<int>(rng.below(30));
    const double delta = 0.02 + 0.2 * rng.uniform01();
    const BoundQuery query = finite_query(thr, C, p, delta);
    const SufficientN r = sufficient_n(query);
    REQUIRE(r.feasible);
    if (C / std::sqrt(static_cast<double>(r.n)) > 0.1 * thr) continue;
    ++compared;
    const FailureBound fb = failure_probability_bound(r.n, query);
    REQUIRE(fb.side_condition_ok);
    CHECK(fb.value <= delta);
  }
  CHECK(compared >= 30);
}

TEST_CASE("search cap: absurd queries come back infeasible") {
  BoundQuery q;
  q.regime = BoundRegime::countable_c_lt2;
  q.threshold_bits = 1e-9;
  q.p = 10;
  q.delta = 0.05;
  q.explicit_C = 1.0;
  q.bias_exponent_c = 1.5;
  const SufficientN r = sufficient_n(q);
  CHECK_FALSE(r.feasible);
  CHECK(r.reason.find("2^60") != std::string::npos);
}

TEST_CASE("bound queries validate their inputs") {
  BoundQuery q;
  q.regime = BoundRegime::finite_alphabet;
  q.threshold_bits = 0.1;
  q.p = 10;
  q.delta = 0.05;
  CHECK_THROWS_AS(sufficient_n(q), std::invalid_argument);  // missing C
  q.regime = BoundRegime::countable_c_lt2;
  q.explicit_C = 0.1;
  CHECK_THROWS_AS(sufficient_n(q), std::invalid_argument);  // missing c
  q.bias_exponent_c = 2.5;
  CHECK_THROWS_AS(sufficient_n(q), std::invalid_argument);  // c outside (1,2)
}
