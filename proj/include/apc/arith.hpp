#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Elementary arithmetic on machine integers shared by the sieve, singular
// series and character modules.
namespace apc::arith {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Largest r with r*r <= n.
u64 isqrt(u64 n) noexcept;

u64 mulmod(u64 a, u64 b, u64 m) noexcept;
u64 powmod(u64 base, u64 exp, u64 m) noexcept;

/// Deterministic Miller-Rabin, exact for every 64-bit n.
bool is_prime(u64 n) noexcept;

/// Prime factorisation by trial division, ascending (prime, exponent) pairs.
std::vector<std::pair<i64, int>> factorize(i64 n);

int mobius(i64 n);
i64 euler_phi(i64 n);

/// All primes p <= n, ascending (simple Eratosthenes).
std::vector<i64> primes_up_to(i64 n);

/// Smallest primitive root modulo p^k for an odd prime p.
i64 primitive_root_prime_power(i64 p, int k);

inline i64 floor_div(i64 a, i64 b) noexcept {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace apc::arith
