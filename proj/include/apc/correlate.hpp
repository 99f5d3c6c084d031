#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apc/sieve.hpp"

// Correlation profiles C(h) = sum_{n in (X, X+N]} f(n) g(n+h) for |h| <= H.
//
// g must be sieved on the widened window (X-H, X+N+H], so both signs of h come
// from one series and no boundary term is dropped. Lag 0 is stored as a
// diagnostic but is not part of the profile proper.
namespace apc::correlate {

using i64 = std::int64_t;
using sieve::WeightedSeries;
using sieve::WeightKind;

enum class Backend { Auto, Direct, Fft };

std::string_view to_string(Backend backend) noexcept;

struct CorrelationProfile {
  i64 x = 0;       // f window is (x, x + n]
  i64 n = 0;
  i64 h_max = 0;
  std::vector<double> values;  // values[h + h_max], h in [-h_max, h_max]
  WeightKind fkind = WeightKind::Custom;
  WeightKind gkind = WeightKind::Custom;
  bool integral = false;        // both inputs 0/1: values are exact integers
  std::string boundary = "extended";
  Backend backend = Backend::Direct;

  /// C(h) for 0 < |h| <= h_max. h = 0 raises DomainError; use zero_lag().
  double at(i64 h) const;
  double zero_lag() const { return values.at(static_cast<std::size_t>(h_max)); }
};

/// Exact sum over the nonzero entries of f and g, compensated for real weights.
/// Deterministic for any thread count: work is split into a fixed number of
/// n-ranges whose partial profiles are reduced in order.
CorrelationProfile correlate_direct(const WeightedSeries& f, const WeightedSeries& g, i64 h_max);

/// Chunked overlap-add correlation through real FFTs. For 0/1 inputs the result
/// is rounded to integers after checking the per-entry error is below 0.25;
/// otherwise PrecisionError is thrown.
CorrelationProfile correlate_fft(const WeightedSeries& f, const WeightedSeries& g, i64 h_max);

/// Backend selection by a cost model; Fft falls back to Direct on PrecisionError.
CorrelationProfile correlate(const WeightedSeries& f, const WeightedSeries& g, i64 h_max,
                             Backend backend = Backend::Auto);

enum class PairKind { E2xE2Restricted, E2xE2Typical, PrimeXE2 };

/// Default picks log weights for restricted pairs (varpi2 x varpi2), 0/1
/// indicators for typical pairs, and Lambda x varpi2 for prime x E2.
enum class Weighting { Default, Weighted, Indicator };

std::string_view to_string(PairKind kind) noexcept;
std::string_view to_string(Weighting weighting) noexcept;

struct PairSeries {
  WeightedSeries f;  // over (X, 2X]
  WeightedSeries g;  // over (X - H, 2X + H]
};

/// The two series for a pair kind, classified from a segment covering (X-H, 2X+H].
PairSeries build_pair_series(PairKind kind, Weighting weighting, i64 x, i64 h_max,
                             const sieve::E2Params& params, const sieve::SieveSegment& seg);

struct PairCorrelation {
  CorrelationProfile profile;
  std::size_t count_f = 0;  // support of f on (X, 2X]
  std::size_t count_g = 0;  // support of g on (X, 2X]
  double total_f = 0.0;
  double total_g = 0.0;
};

PairCorrelation correlate_weighted_pair(PairKind kind, i64 x, i64 h_max,
                                        const sieve::E2Params& params,
                                        Weighting weighting = Weighting::Default,
                                        Backend backend = Backend::Auto);

PairCorrelation correlate_weighted_pair(PairKind kind, i64 x, i64 h_max,
                                        const sieve::E2Params& params,
                                        const sieve::SieveSegment& seg,
                                        Weighting weighting = Weighting::Default,
                                        Backend backend = Backend::Auto);

}  // namespace apc::correlate
