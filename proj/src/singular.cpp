#include "apc/singular.hpp"

#include <cstdlib>
#include <fmt/format.h>
#include <numeric>

#include "apc/arith.hpp"
#include "apc/errors.hpp"
#include "apc/summation.hpp"

namespace apc::singular {

namespace {

// spf[n] for 0 <= n <= bound (spf[0] = spf[1] = 0).
std::vector<std::uint32_t> spf_table(i64 bound) {
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(bound) + 1, 0);
  for (i64 i = 2; i <= bound; ++i) {
    if (spf[i] != 0) continue;
    for (i64 j = i; j <= bound; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return spf;
}

double truncated_with_table(i64 h, i64 q0, std::span<const std::uint32_t> spf,
                            std::vector<double>& term) {
  // For squarefree q the summand is multiplicative: prod_{p | q} f_p(h) with
  // f_p = 1/(p-1) when p | h and -1/(p-1)^2 otherwise.
  const i64 ah = std::abs(h);
  term[1] = 1.0;
  CompensatedSum acc;
  acc.add(1.0);
  for (i64 q = 2; q <= q0; ++q) {
    const i64 p = spf[q];
    const i64 r = q / p;
    if (r % p == 0) {
      term[q] = 0.0;
      continue;
    }
    const double pm1 = static_cast<double>(p - 1);
    const double fp = (ah % p == 0) ? 1.0 / pm1 : -1.0 / (pm1 * pm1);
    term[q] = term[r] * fp;
    if (term[q] != 0.0) acc.add(term[q]);
  }
  return acc.value();
}

}  // namespace

SmallPrimeCache::SmallPrimeCache(i64 cutoff) : cutoff_(cutoff) {
  if (cutoff < 2) throw ParameterError(fmt::format("prime cache cutoff {} must be >= 2", cutoff));
  primes_ = arith::primes_up_to(cutoff);
}

double twin_prime_constant(i64 cutoff) {
  if (cutoff < 3) {
    throw ParameterError(fmt::format("twin prime constant cutoff {} must be >= 3", cutoff));
  }
  double product = 1.0;
  for (i64 p : arith::primes_up_to(cutoff)) {
    if (p == 2) continue;
    const double pm1 = static_cast<double>(p - 1);
    product *= 1.0 - 1.0 / (pm1 * pm1);
  }
  return product;
}

double twin_prime_constant() {
  static const double value = twin_prime_constant(kDefaultTwinCutoff);
  return value;
}

double singular_series(i64 h, const SmallPrimeCache& cache) {
  if (h == 0) throw DomainError("singular series is undefined at h = 0");
  i64 rest = std::abs(h);
  if (rest % 2 != 0) return 0.0;
  while (rest % 2 == 0) rest /= 2;
  if (static_cast<i64>(arith::isqrt(static_cast<arith::u64>(rest))) > cache.cutoff()) {
    throw ParameterError(
        fmt::format("prime cache cutoff {} too small to factor h = {}", cache.cutoff(), h));
  }
  double value = 2.0 * twin_prime_constant();
  for (i64 p : cache.primes()) {
    if (p == 2) continue;
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    value *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
  }
  if (rest > 1) value *= static_cast<double>(rest - 1) / static_cast<double>(rest - 2);
  return value;
}

i64 ramanujan_sum(i64 q, i64 n) {
  if (q < 1) throw ParameterError(fmt::format("ramanujan_sum needs q >= 1, got {}", q));
  const i64 g = std::gcd(q, std::abs(n));  // gcd(q, 0) = q
  const i64 r = q / g;
  const int mu = arith::mobius(r);
  if (mu == 0) return 0;
  return mu * (arith::euler_phi(q) / arith::euler_phi(r));
}

double truncated_singular_series(i64 h, i64 q0) {
  const i64 shifts[] = {h};
  return truncated_singular_series(shifts, q0).front();
}

std::vector<double> truncated_singular_series(std::span<const i64> shifts, i64 q0) {
  if (q0 < 1) throw ParameterError(fmt::format("truncation Q0 = {} must be >= 1", q0));
  for (i64 h : shifts) {
    if (h == 0) throw DomainError("truncated singular series is undefined at h = 0");
  }
  const auto spf = spf_table(q0);
  std::vector<double> out(shifts.size());
  const auto count = static_cast<std::int64_t>(shifts.size());

#pragma omp parallel
  {
    std::vector<double> term(static_cast<std::size_t>(q0) + 1);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] =
          truncated_with_table(shifts[static_cast<std::size_t>(i)], q0, spf, term);
    }
  }
  return out;
}

std::vector<double> singular_series_range(i64 x) {
  if (x < 1) throw ParameterError(fmt::format("singular series range needs x >= 1, got {}", x));
  const auto spf = spf_table(x);
  // local[h] = prod_{p | h, p > 2} (p-1)/(p-2), built from h / p^k.
  std::vector<double> local(static_cast<std::size_t>(x) + 1, 1.0);
  for (i64 h = 2; h <= x; ++h) {
    const i64 p = spf[h];
    i64 r = h;
    while (r % p == 0) r /= p;
    local[h] = local[r] * (p == 2 ? 1.0 : static_cast<double>(p - 1) / static_cast<double>(p - 2));
  }
  const double twice_pi2 = 2.0 * twin_prime_constant();
  std::vector<double> out(static_cast<std::size_t>(x), 0.0);
  for (i64 h = 2; h <= x; h += 2) out[h - 1] = twice_pi2 * local[h];
  return out;
}

double singular_series_average(i64 x) {
  if (x < 2) throw ParameterError(fmt::format("singular series average needs x >= 2, got {}", x));
  return compensated_total(singular_series_range(x));
}

double SingularSeriesTable::at(i64 h) const {
  if (h == 0) throw DomainError("singular series is undefined at h = 0");
  const i64 ah = std::abs(h);
  if (ah > hmax) throw RangeError(fmt::format("|h| = {} exceeds table bound {}", ah, hmax));
  return euler[ah - 1];
}

SingularSeriesTable build_singular_series_table(i64 hmax, std::optional<i64> q0) {
  SingularSeriesTable table;
  table.hmax = hmax;
  table.euler = singular_series_range(hmax);
  if (q0) {
    table.q0 = q0;
    std::vector<i64> shifts(static_cast<std::size_t>(hmax));
    std::iota(shifts.begin(), shifts.end(), i64{1});
    table.truncated = truncated_singular_series(shifts, *q0);
  }
  return table;
}

}  // namespace apc::singular
