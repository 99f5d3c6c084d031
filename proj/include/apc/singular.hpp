#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

// The pair singular series S(h) = 2*Pi2 * prod_{p | h, p > 2} (p-1)/(p-2) for even h
// (zero for odd h), its truncated Ramanujan-sum expansion, and the twin prime
// constant Pi2 = prod_{p > 2} (1 - 1/(p-1)^2).
namespace apc::singular {

using i64 = std::int64_t;

inline constexpr i64 kDefaultTwinCutoff = 10'000'000;

class SmallPrimeCache {
 public:
  explicit SmallPrimeCache(i64 cutoff);

  i64 cutoff() const noexcept { return cutoff_; }
  std::span<const i64> primes() const noexcept { return primes_; }

 private:
  i64 cutoff_;
  std::vector<i64> primes_;
};

/// prod_{2 < p <= cutoff} (1 - 1/(p-1)^2). The tail beyond the cutoff is below 1/cutoff.
double twin_prime_constant(i64 cutoff);

/// Pi2 at kDefaultTwinCutoff, computed on first use and cached.
double twin_prime_constant();

/// S(h) via the Euler product; S(-h) = S(h). The cache must satisfy cutoff^2 >= |h|.
double singular_series(i64 h, const SmallPrimeCache& cache);

/// c_q(n) by the closed form mu(q/g) phi(q) / phi(q/g), g = gcd(q, n).
i64 ramanujan_sum(i64 q, i64 n);

/// sum_{q <= q0} mu(q)^2 c_q(-h) / phi(q)^2.
double truncated_singular_series(i64 h, i64 q0);

/// The truncated sum for many shifts at once, sharing the spf table of q <= q0.
std::vector<double> truncated_singular_series(std::span<const i64> shifts, i64 q0);

/// S(h) for h = 1..x from one spf sieve over h. Entry h-1 holds S(h).
std::vector<double> singular_series_range(i64 x);

/// sum_{1 <= h <= x} S(h).
double singular_series_average(i64 x);

struct SingularSeriesTable {
  i64 hmax = 0;
  std::vector<double> euler;  // euler[h-1] = S(h)
  std::optional<i64> q0;
  std::vector<double> truncated;  // empty unless q0 is set

  double at(i64 h) const;
};

SingularSeriesTable build_singular_series_table(i64 hmax, std::optional<i64> q0 = std::nullopt);

}  // namespace apc::singular
