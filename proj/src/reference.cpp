#include "apc/reference.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "apc/arith.hpp"
#include "apc/errors.hpp"
#include "apc/singular.hpp"
#include "apc/summation.hpp"

namespace apc::reference {

sieve::SieveSegment spf_segment_serial(i64 start, i64 len) {
  if (start < 1 || len < 1 || start + len > sieve::kMaxWindowEnd) {
    throw RangeError(fmt::format("window ({}, {}] unsupported", start, start + len));
  }
  std::vector<std::uint32_t> raw(static_cast<std::size_t>(len), 0);
  const i64 end = start + len;
  for (i64 p : arith::primes_up_to(static_cast<i64>(arith::isqrt(static_cast<arith::u64>(end))))) {
    i64 first = std::max(p * p, (start / p + 1) * p);
    for (i64 n = first; n <= end; n += p) {
      auto& slot = raw[static_cast<std::size_t>(n - start - 1)];
      if (slot == 0) slot = static_cast<std::uint32_t>(p);
    }
  }
  return sieve::SieveSegment(start, std::move(raw));
}

correlate::CorrelationProfile correlate_naive(const sieve::WeightedSeries& f,
                                              const sieve::WeightedSeries& g, i64 h_max) {
  if (!g.covers(f.start - h_max, f.end() + h_max)) {
    throw ParameterError("g does not cover the widened window");
  }
  correlate::CorrelationProfile p;
  p.x = f.start;
  p.n = f.len();
  p.h_max = h_max;
  p.fkind = f.kind;
  p.gkind = g.kind;
  p.integral = sieve::is_indicator(f.kind) && sieve::is_indicator(g.kind);
  p.values.assign(static_cast<std::size_t>(2 * h_max + 1), 0.0);
  for (i64 h = -h_max; h <= h_max; ++h) {
    CompensatedSum acc;
    for (i64 n = f.start + 1; n <= f.end(); ++n) acc.add(f.at(n) * g.at(n + h));
    p.values[static_cast<std::size_t>(h + h_max)] = acc.value();
  }
  return p;
}

std::complex<double> exp_sum_naive(const sieve::WeightedSeries& w, double alpha) {
  std::complex<double> acc = 0.0;
  for (i64 i = 0; i < w.len(); ++i) {
    const double v = w.values[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    const long double phase = static_cast<long double>(w.start + 1 + i) * alpha;
    const double frac = static_cast<double>(phase - std::floor(phase));
    acc += std::polar(v, 2.0 * std::numbers::pi * frac);
  }
  return acc;
}

double truncated_singular_series_naive(i64 h, i64 q0) {
  CompensatedSum acc;
  for (i64 q = 1; q <= q0; ++q) {
    const int mu = arith::mobius(q);
    if (mu == 0) continue;
    const double phi = static_cast<double>(arith::euler_phi(q));
    acc.add(static_cast<double>(singular::ramanujan_sum(q, -h)) / (phi * phi));
  }
  return acc.value();
}

double parseval_lhs_naive(const sieve::WeightedSeries& w, i64 m) {
  CompensatedSum acc;
  for (i64 k = 0; k < m; ++k) {
    std::complex<double> s = 0.0;
    for (i64 i = 0; i < w.len(); ++i) {
      const double v = w.values[static_cast<std::size_t>(i)];
      if (v == 0.0) continue;
      const i64 r = ((w.start + 1 + i) % m) * k % m;
      s += std::polar(v, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m));
    }
    acc.add(std::norm(s));
  }
  return acc.value() / static_cast<double>(m);
}

}  // namespace apc::reference
