#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "treelearn/model.hpp"  // TailParams
#include "treelearn/prob.hpp"

namespace treelearn {

// ---------------------------------------------------------------------------
// Bias constant of the plug-in entropy estimator under power-law tails,
// valid for c in (1, 2):
//   C = 3 c2 [ c2^((1-c)/c) + (1/c) Int_{c1}^inf u^(1/c - 2) ln(e u / c1) du
//              + 1/c1 ].
// The integral is evaluated two independent ways -- adaptive quadrature over
// dyadic panels with an analytic tail, and the closed antiderivative -- and
// both are reported so callers can cross-check them.
// ---------------------------------------------------------------------------

struct BiasConstantResult {
  double value = 0.0;               // C, using the closed-form integral
  double integral_quadrature = 0.0; // quadrature + analytic tail
  double integral_closed_form = 0.0;
};

namespace detail {

// Antiderivative of u^a ln(e u / c1) for a < -1:
//   F(u) = u^(a+1) [ ln u / (a+1) + (1 - ln c1 - 1/(a+1)) / (a+1) ],
// with F(inf) = 0.
inline double tail_antiderivative(double u, double a, double c1) {
  const double ap1 = a + 1.0;
  return std::pow(u, ap1) *
         (std::log(u) / ap1 + (1.0 - std::log(c1) - 1.0 / ap1) / ap1);
}

inline double bias_integrand(double u, double a, double c1) {
  return std::pow(u, a) * std::log(std::exp(1.0) * u / c1);
}

inline double adaptive_simpson(double a, double c1, double lo, double hi, double flo,
                               double fmid, double fhi, double whole, double eps,
                               int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  const double flm = bias_integrand(lm, a, c1), frm = bias_integrand(rm, a, c1);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson(a, c1, lo, mid, flo, flm, fmid, left, eps / 2.0, depth - 1) +
         adaptive_simpson(a, c1, mid, hi, fmid, frm, fhi, right, eps / 2.0, depth - 1);
}

inline double integrate_panel(double a, double c1, double lo, double hi, double eps) {
  const double mid = 0.5 * (lo + hi);
  const double flo = bias_integrand(lo, a, c1), fmid = bias_integrand(mid, a, c1),
               fhi = bias_integrand(hi, a, c1);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return adaptive_simpson(a, c1, lo, hi, flo, fmid, fhi, whole, eps, 40);
}

}  // namespace detail

inline BiasConstantResult bias_constant(const TailParams& tail) {
  const double c = tail.c, c1 = tail.c1, c2 = tail.c2;
  if (!(c > 1.0 && c < 2.0))
    throw std::invalid_argument("bias_constant: formula requires c in (1, 2)");
  if (!(c1 > 0.0 && c2 > 0.0 && c1 <= c2))
    throw std::invalid_argument("bias_constant: need 0 < c1 <= c2");
  const double a = 1.0 / c - 2.0;  // exponent; a + 1 = (1-c)/c < 0

  // Closed form: Int_{c1}^inf u^a ln(e u/c1) du = c1^((1-c)/c) c (2c-1)/(1-c)^2.
  const double closed =
      std::pow(c1, (1.0 - c) / c) * c * (2.0 * c - 1.0) / ((1.0 - c) * (1.0 - c));

  // Quadrature over dyadic panels [c1 2^k, c1 2^(k+1)] + analytic tail.
  double quad = 0.0;
  double lo = c1;
  for (int k = 0; k < 48; ++k) {
    const double hi = lo * 2.0;
    quad += detail::integrate_panel(a, c1, lo, hi, 1e-14 * std::max(1.0, closed));
    lo = hi;
  }
  quad += -detail::tail_antiderivative(lo, a, c1);

  BiasConstantResult r;
  r.integral_quadrature = quad;
  r.integral_closed_form = closed;
  r.value = 3.0 * c2 * (std::pow(c2, (1.0 - c) / c) + closed / c + 1.0 / c1);
  return r;
}

// ---------------------------------------------------------------------------
// Sufficient sample-size calculators. The main inequality, in every regime,
// is
//   n / log2^2(n) >= 72 ln(p / delta) / (thr - C bias(n))^2   [theorem form]
// together with the side condition thr > C bias(n), where thr is the
// (noisy) information threshold in bits and bias(n) is the regime's entropy
// estimator bias rate:
//   countable_c_lt2, noisy : n^((1-c)/c), c in (1, 2)
//   finite_alphabet        : n^(-1/2)
//   countable_c_ge2        : ln(n) / sqrt(n)
// The proof form keeps the un-simplified constants:
//   n / log2^2(n) >= 2 ln(6 binom(p,2) / delta) / (thr/3 - C bias(n))^2
// with side condition thr > 3 C bias(n). The theorem statement absorbs the
// factor of 3 into C ambiguously, so both forms are exposed; the theorem
// form is the default. ln(p/delta) is a natural logarithm; log2^2(n) is
// base 2; thr and C share units (bits).
// ---------------------------------------------------------------------------

enum class BoundRegime { countable_c_lt2, finite_alphabet, countable_c_ge2, noisy };
enum class BoundForm { theorem, proof };

struct BoundQuery {
  double threshold_bits = 0.0;  // I° (or the noisy threshold for `noisy`)
  int p = 0;
  double delta = 0.0;
  BoundRegime regime = BoundRegime::finite_alphabet;
  std::optional<TailParams> tail;          // supplies C and c for power-law regimes
  std::optional<double> explicit_C;        // overrides / required when no formula exists
  std::optional<double> bias_exponent_c;   // c when explicit_C is used in power-law regimes
  BoundForm form = BoundForm::theorem;
};

struct SufficientN {
  bool feasible = false;
  std::uint64_t n = 0;
  double main_lhs = 0.0;     // n / log2^2(n) at the returned n
  double main_rhs = 0.0;     // regime RHS at the returned n
  double side_margin = 0.0;  // thr - C bias(n) (theorem) or thr - 3C bias(n) (proof)
  std::string reason;        // set when infeasible
};

inline constexpr std::uint64_t kBoundSearchCap = 1ULL << 60;

namespace detail {

struct ResolvedBound {
  double C = 0.0;
  double c = 0.0;  // bias exponent parameter, meaningful for power-law regimes
};

inline ResolvedBound resolve_bound(const BoundQuery& q) {
  if (!(q.delta > 0.0 && q.delta < 1.0))
    throw std::invalid_argument("bound: delta must lie in (0, 1)");
  if (q.p < 2) throw std::invalid_argument("bound: p must be >= 2");
  ResolvedBound r;
  switch (q.regime) {
    case BoundRegime::countable_c_lt2:
    case BoundRegime::noisy: {
      if (q.tail)
        r.c = q.tail->c;
      else if (q.bias_exponent_c)
        r.c = *q.bias_exponent_c;
      else
        throw std::invalid_argument("bound: power-law regime needs tail params or c");
      if (!(r.c > 1.0 && r.c < 2.0))
        throw std::invalid_argument("bound: this regime requires c in (1, 2)");
      if (q.explicit_C)
        r.C = *q.explicit_C;
      else if (q.tail)
        r.C = bias_constant(*q.tail).value;
      else
        throw std::invalid_argument("bound: need tail params or an explicit C");
      break;
    }
    case BoundRegime::finite_alphabet:
    case BoundRegime::countable_c_ge2: {
      // No formula for C is available in these regimes; it must be supplied.
      if (!q.explicit_C)
        throw std::invalid_argument("bound: this regime requires an explicit C");
      r.C = *q.explicit_C;
      break;
    }
  }
  if (!(r.C > 0.0)) throw std::invalid_argument("bound: C must be positive");
  return r;
}

inline double bias_rate(const BoundQuery& q, const ResolvedBound& r, double n) {
  switch (q.regime) {
    case BoundRegime::countable_c_lt2:
    case BoundRegime::noisy:
      return std::pow(n, (1.0 - r.c) / r.c);
    case BoundRegime::finite_alphabet:
      return 1.0 / std::sqrt(n);
    case BoundRegime::countable_c_ge2:
      return std::log(n) / std::sqrt(n);  // natural log
  }
  return 0.0;
}

inline double log2_sq(double n) {
  const double l = std::log2(n);
  return l * l;
}

inline double binom2(int p) { return 0.5 * static_cast<double>(p) * (p - 1); }

struct PredicateParts {
  bool holds = false;
  double lhs = 0.0, rhs = 0.0, side = 0.0;
};

inline PredicateParts bound_predicate(const BoundQuery& q, const ResolvedBound& r,
                                      std::uint64_t n) {
  PredicateParts out;
  const double nd = static_cast<double>(n);
  const double b = r.C * bias_rate(q, r, nd);
  out.lhs = nd / log2_sq(nd);
  if (q.form == BoundForm::theorem) {
    out.side = q.threshold_bits - b;
    if (out.side <= 0.0) return out;
    out.rhs = 72.0 * std::log(static_cast<double>(q.p) / q.delta) / (out.side * out.side);
  } else {
    out.side = q.threshold_bits - 3.0 * b;
    if (out.side <= 0.0) return out;
    const double gap = q.threshold_bits / 3.0 - b;
    out.rhs = 2.0 * std::log(6.0 * binom2(q.p) / q.delta) / (gap * gap);
  }
  out.holds = out.lhs >= out.rhs;
  return out;
}

}  // namespace detail

// Direct evaluation of the regime's inequality pair at a given n.
inline bool bound_inequalities_hold(const BoundQuery& q, std::uint64_t n) {
  if (n < 3) return false;
  if (!(q.threshold_bits > 0.0)) return false;
  return detail::bound_predicate(q, detail::resolve_bound(q), n).holds;
}

// Smallest n >= 3 satisfying the regime's inequality pair, or an infeasible
// result. n/log2^2(n) dips until n ~ 8 and the bias rates are likewise only
// eventually monotone, so [3, 64] is scanned directly; beyond that the
// predicate is monotone and geometric doubling plus bisection finds the
// boundary. The search is capped at 2^60.
inline SufficientN sufficient_n(const BoundQuery& q) {
  const detail::ResolvedBound r = detail::resolve_bound(q);
  SufficientN out;
  if (!(q.threshold_bits > 0.0)) {
    out.reason = "threshold is not positive";
    return out;
  }
  auto finish = [&](std::uint64_t n) {
    const auto parts = detail::bound_predicate(q, r, n);
    out.feasible = true;
    out.n = n;
    out.main_lhs = parts.lhs;
    out.main_rhs = parts.rhs;
    out.side_margin = parts.side;
    return out;
  };
  for (std::uint64_t n = 3; n <= 64; ++n)
    if (detail::bound_predicate(q, r, n).holds) return finish(n);
  std::uint64_t lo = 64, hi = 128;
  while (!detail::bound_predicate(q, r, hi).holds) {
    lo = hi;
    if (hi >= kBoundSearchCap) {
      out.reason = "no admissible n up to 2^60";
      return out;
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (detail::bound_predicate(q, r, mid).holds)
      hi = mid;
    else
      lo = mid;
  }
  return finish(hi);
}

// Failure-probability bound at a given n, following the proof expression
//   delta(n) = 6 binom(p,2) exp( -n (thr/3 - C bias(n))^2 / (2 log2^2 n) ),
// valid under the side condition thr > 3 C bias(n). Reports vacuity when
// the bound is >= 1.
struct FailureBound {
  bool side_condition_ok = false;
  double value = 1.0;
  bool vacuous = true;
};

inline FailureBound failure_probability_bound(std::uint64_t n, const BoundQuery& q) {
  if (n < 3) throw std::invalid_argument("failure_probability_bound: n must be >= 3");
  const detail::ResolvedBound r = detail::resolve_bound(q);
  const double nd = static_cast<double>(n);
  const double b = r.C * detail::bias_rate(q, r, nd);
  FailureBound out;
  if (!(q.threshold_bits > 3.0 * b)) return out;  // vacuous-bound result
  out.side_condition_ok = true;
  const double gap = q.threshold_bits / 3.0 - b;
  out.value = 6.0 * detail::binom2(q.p) *
              std::exp(-nd * gap * gap / (2.0 * detail::log2_sq(nd)));
  out.vacuous = !(out.value < 1.0);
  return out;
}

}  // namespace treelearn
