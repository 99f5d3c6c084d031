#include "apc/circle.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <random>
#include <vector>

#include "apc/arith.hpp"
#include "apc/errors.hpp"
#include "apc/summation.hpp"

namespace apc::circle {

namespace {

constexpr i64 kMaxGroups = 64;
constexpr i64 kMinGroupLen = 1024;
constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

bool qualifies(long double alpha, i64 q, i64 q_max, i64& a_out) {
  const long double qa = static_cast<long double>(q) * alpha;
  const long double a = std::nearbyint(qa);
  if (std::abs(qa - a) <= 1.0L / static_cast<long double>(q_max)) {
    a_out = static_cast<i64>(a);
    return true;
  }
  return false;
}

cplx exp_sum_range(const sieve::WeightedSeries& w, i64 lo, i64 hi, long double alpha) {
  CompensatedComplexSum acc;
  for (i64 i = lo; i < hi; ++i) {
    const double v = w.values[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    const i64 n = w.start + 1 + i;
    acc.add(v * e(static_cast<long double>(n) * alpha));
  }
  return acc.value();
}

}  // namespace

ArcParams ArcParams::make(i64 q0, i64 q_max) {
  if (q0 < 1 || q_max <= q0) {
    throw ParameterError(
        fmt::format("arc parameters need 1 <= Q0 < Q, got Q0={}, Q={}", q0, q_max));
  }
  return ArcParams{q0, q_max};
}

cplx e(long double x) noexcept {
  const long double frac = x - std::floor(x);
  const long double angle = kTwoPi * frac;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

double dist_to_int(double x) noexcept { return std::abs(x - std::nearbyint(x)); }

cplx exp_sum(const sieve::WeightedSeries& weights, double alpha) {
  const i64 len = weights.len();
  const i64 groups = std::clamp<i64>(len / kMinGroupLen, 1, kMaxGroups);
  std::vector<cplx> parts(static_cast<std::size_t>(groups));
#pragma omp parallel for schedule(static)
  for (i64 k = 0; k < groups; ++k) {
    parts[static_cast<std::size_t>(k)] =
        exp_sum_range(weights, len * k / groups, len * (k + 1) / groups, alpha);
  }
  CompensatedComplexSum total;
  for (cplx z : parts) total.add(z);
  return total.value();
}

cplx exp_sum_rational(const sieve::WeightedSeries& weights, i64 k, i64 m) {
  if (m < 1) throw ParameterError(fmt::format("modulus M = {} must be positive", m));
  CompensatedComplexSum acc;
  const i64 kr = ((k % m) + m) % m;
  for (i64 i = 0; i < weights.len(); ++i) {
    const double v = weights.values[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    const i64 n = weights.start + 1 + i;
    const auto r = static_cast<i64>((static_cast<__int128>(n % m) * kr) % m);
    acc.add(v * e(static_cast<long double>(r) / static_cast<long double>(m)));
  }
  return acc.value();
}

cplx geometric_phase_sum(double beta, i64 x) {
  if (x < 1) throw ParameterError(fmt::format("geometric sum length {} must be >= 1", x));
  const long double b = static_cast<long double>(beta) - std::nearbyint(static_cast<long double>(beta));
  if (b == 0.0L) return {static_cast<double>(x), 0.0};
  // e(b (x+1)/2) * sin(pi b x) / sin(pi b), with the angles reduced before use.
  const long double xl = static_cast<long double>(x);
  const long double num_turns = std::fmod(b * xl, 2.0L);
  const long double ratio = std::sin(std::numbers::pi_v<long double> * num_turns) /
                            std::sin(std::numbers::pi_v<long double> * b);
  const cplx phase = e(b * (xl + 1.0L) / 2.0L);
  return phase * static_cast<double>(ratio);
}

ArcLabel classify_arc(double alpha, const ArcParams& params) {
  const long double al = alpha;
  i64 a = 0;
  for (i64 q = 1; q <= std::min(params.q0, params.q_max); ++q) {
    if (qualifies(al, q, params.q_max, a)) return ArcLabel{true, a, q};
  }
  // Convergents of alpha: the smallest qualifying q beyond q0 is one of them.
  long double x = al;
  i64 p_prev = 1, q_prev = 0;
  i64 p_cur = static_cast<i64>(std::floor(x)), q_cur = 1;
  x -= std::floor(x);
  while (q_cur <= params.q_max) {
    if (q_cur > params.q0 && qualifies(al, q_cur, params.q_max, a)) {
      return ArcLabel{false, a, q_cur};
    }
    if (x == 0.0L) break;
    x = 1.0L / x;
    const auto digit = static_cast<i64>(std::floor(x));
    x -= static_cast<long double>(digit);
    const i64 p_next = digit * p_cur + p_prev;
    const i64 q_next = digit * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
  }
  // Rounding in the expansion can skip a denominator; fall back to a scan.
  for (i64 q = params.q0 + 1; q <= params.q_max; ++q) {
    if (qualifies(al, q, params.q_max, a)) return ArcLabel{false, a, q};
  }
  throw IdentityError(fmt::format("no rational approximation with q <= {} found for {}",
                                  params.q_max, alpha));
}

AAlpha eval_a_alpha(double alpha, i64 x, double mertens, const ArcLabel& arc) {
  if (x < 1) throw ParameterError(fmt::format("X = {} must be positive", x));
  AAlpha out;
  out.on_minor_arc = !arc.major;
  const int mu = arith::mobius(arc.q);
  if (mu == 0) {
    out.value = {0.0, 0.0};
    return out;
  }
  const double beta = static_cast<double>(static_cast<long double>(alpha) -
                                          static_cast<long double>(arc.a) / arc.q);
  // sum_{X < n <= 2X} e(beta n) = e(beta X) sum_{m=1}^{X} e(beta m)
  const cplx window = e(static_cast<long double>(beta) * x) * geometric_phase_sum(beta, x);
  out.value = static_cast<double>(mu) / static_cast<double>(arith::euler_phi(arc.q)) * mertens *
              window;
  return out;
}

AAlpha eval_a_alpha(double alpha, i64 x, const sieve::E2Params& params, const ArcLabel& arc) {
  return eval_a_alpha(alpha, x, sieve::mertens_sum(params), arc);
}

ParsevalResult discrete_parseval(const sieve::WeightedSeries& weights, i64 m) {
  if (m < weights.len()) {
    throw ParameterError(fmt::format("Parseval modulus M = {} is below the window length {}", m,
                                     weights.len()));
  }
  std::vector<cplx> roots(static_cast<std::size_t>(m));
  for (i64 r = 0; r < m; ++r) {
    roots[static_cast<std::size_t>(r)] = e(static_cast<long double>(r) / static_cast<long double>(m));
  }
  std::vector<i64> support;
  for (i64 i = 0; i < weights.len(); ++i) {
    if (weights.values[static_cast<std::size_t>(i)] != 0.0) support.push_back(i);
  }
  std::vector<double> power(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static)
  for (i64 k = 0; k < m; ++k) {
    CompensatedComplexSum acc;
    for (i64 i : support) {
      const i64 n = weights.start + 1 + i;
      const auto r = static_cast<i64>((static_cast<__int128>(n % m) * k) % m);
      acc.add(weights.values[static_cast<std::size_t>(i)] * roots[static_cast<std::size_t>(r)]);
    }
    power[static_cast<std::size_t>(k)] = std::norm(acc.value());
  }
  ParsevalResult out;
  out.lhs = compensated_total(power) / static_cast<double>(m);
  CompensatedSum rhs;
  for (double v : weights.values) rhs.add(v * v);
  out.rhs = rhs.value();
  return out;
}

double major_arc_measure(const ArcParams& params) {
  if (params.q0 < 1 || params.q_max <= params.q0) {
    throw ParameterError("arc parameters need 1 <= Q0 < Q");
  }
  if (params.q_max < 2 * params.q0 * params.q0) {
    throw ParameterError(fmt::format(
        "major arcs overlap: need Q >= 2 Q0^2 = {}, got Q = {}", 2 * params.q0 * params.q0,
        params.q_max));
  }
  CompensatedSum total;
  for (i64 q = 1; q <= params.q0; ++q) {
    total.add(static_cast<double>(arith::euler_phi(q)) * 2.0 /
              (static_cast<double>(q) * static_cast<double>(params.q_max)));
  }
  return total.value();
}

double major_arc_frequency(const ArcParams& params, i64 samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> offsets(static_cast<std::size_t>(samples));
  for (double& u : offsets) u = unit(rng);
  i64 hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (i64 i = 0; i < samples; ++i) {
    const double alpha = (static_cast<double>(i) + offsets[static_cast<std::size_t>(i)]) /
                         static_cast<double>(samples);
    if (alpha < 1.0 && classify_arc(alpha, params).major) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace apc::circle
