#pragma once

#include <complex>
#include <cstdint>

#include "apc/sieve.hpp"

// Circle-method laboratory: exponential sums over weighted series, the
// major/minor arc dissection of [0, 1), and the finite identities behind it.
namespace apc::circle {

using i64 = std::int64_t;
using cplx = std::complex<double>;

/// Major arcs are |alpha - a/q| <= 1/(qQ) with q <= q0; q0 < q_max.
struct ArcParams {
  i64 q0 = 1;
  i64 q_max = 2;

  static ArcParams make(i64 q0, i64 q_max);
};

struct ArcLabel {
  bool major = false;
  i64 a = 0;
  i64 q = 1;  // smallest q <= Q with |alpha - a/q| <= 1/(qQ); a/q reduced
};

/// e(x) = exp(2 pi i x), with x reduced mod 1 first.
cplx e(long double x) noexcept;

/// S(alpha) = sum_n w(n) e(n alpha), compensated.
cplx exp_sum(const sieve::WeightedSeries& weights, double alpha);

/// S(k/M) with the phase n*k reduced exactly mod M.
cplx exp_sum_rational(const sieve::WeightedSeries& weights, i64 k, i64 m);

/// sum_{n=1}^{x} e(beta n) in closed form.
cplx geometric_phase_sum(double beta, i64 x);

/// Distance to the nearest integer.
double dist_to_int(double x) noexcept;

/// Smallest qualifying denominator, found by scanning q <= q0 and then the
/// continued-fraction convergents of alpha (the record minima of ||q alpha||).
ArcLabel classify_arc(double alpha, const ArcParams& params);

struct AAlpha {
  cplx value;
  bool on_minor_arc = false;  // the formula was evaluated off the major arcs
};

/// a(alpha) = (mu(q)/phi(q)) * mertens * sum_{X < n <= 2X} e(beta n), beta = alpha - a/q.
AAlpha eval_a_alpha(double alpha, i64 x, const sieve::E2Params& params, const ArcLabel& arc);
AAlpha eval_a_alpha(double alpha, i64 x, double mertens, const ArcLabel& arc);

struct ParsevalResult {
  double lhs = 0.0;  // (1/M) sum_{k<M} |S(k/M)|^2
  double rhs = 0.0;  // sum w(n)^2
};

/// Requires M >= window length, so n = m mod M forces n = m.
ParsevalResult discrete_parseval(const sieve::WeightedSeries& weights, i64 m);

/// sum_{q <= q0} phi(q) * 2/(qQ); needs Q >= 2 q0^2 so the arcs are disjoint.
double major_arc_measure(const ArcParams& params);

/// Share of `samples` stratified uniform points of [0, 1) classified Major.
double major_arc_frequency(const ArcParams& params, i64 samples, std::uint64_t seed);

}  // namespace apc::circle
