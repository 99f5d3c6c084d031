#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "apc/correlate.hpp"
#include "apc/sieve.hpp"

// Serial, unoptimised versions of the parallel kernels. Used as test baselines
// and by the benchmark target.
namespace apc::reference {

using i64 = std::int64_t;

sieve::SieveSegment spf_segment_serial(i64 start, i64 len);

/// Dense O(N H) correlation, one lag at a time.
correlate::CorrelationProfile correlate_naive(const sieve::WeightedSeries& f,
                                              const sieve::WeightedSeries& g, i64 h_max);

std::complex<double> exp_sum_naive(const sieve::WeightedSeries& w, double alpha);

/// sum_{q <= q0} mu(q)^2 c_q(-h) / phi(q)^2, one q at a time.
double truncated_singular_series_naive(i64 h, i64 q0);

/// (1/M) sum_k |S(k/M)|^2 with every S(k/M) summed from scratch.
double parseval_lhs_naive(const sieve::WeightedSeries& w, i64 m);

}  // namespace apc::reference
