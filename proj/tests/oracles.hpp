#pragma once

// Brute-force oracles, deliberately naive and independent of the library's
// sieves and closed forms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline i64 trial_spf(i64 n) {
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return d;
  }
  return n;
}

inline bool is_prime(i64 n) { return n >= 2 && trial_spf(n) == n; }

inline std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> out;
  for (i64 d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// (p1, p2) with p1 < p2 when n is a product of two distinct primes.
inline std::optional<std::pair<i64, i64>> distinct_two(i64 n) {
  const auto f = prime_factors(n);
  if (f.size() != 2 || f[0] == f[1]) return std::nullopt;
  return std::pair{f[0], f[1]};
}

inline bool in_restricted(i64 n, i64 p, i64 p_upper) {
  const auto f = distinct_two(n);
  return f && f->first > p && f->first <= p_upper;
}

inline bool in_typical(i64 n, i64 p1, i64 p2) {
  const auto f = distinct_two(n);
  return f && f->first >= p1 && f->first <= p2;
}

inline double von_mangoldt(i64 n) {
  const auto f = prime_factors(n);
  if (f.empty()) return 0.0;
  for (i64 p : f) {
    if (p != f[0]) return 0.0;
  }
  return std::log(static_cast<double>(f[0]));
}

inline std::complex<double> e(double x) {
  return std::polar(1.0, 2.0 * std::numbers::pi * (x - std::floor(x)));
}

/// c_q(n) as the sum over reduced residues.
inline std::complex<double> ramanujan_direct(i64 q, i64 n) {
  std::complex<double> acc = 0.0;
  for (i64 a = 1; a <= q; ++a) {
    if (std::gcd(a, q) == 1) {
      const i64 r = ((a * n) % q + q) % q;
      acc += e(static_cast<double>(r) / static_cast<double>(q));
    }
  }
  return acc;
}

inline int mobius(i64 n) {
  const auto f = prime_factors(n);
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f[i] == f[i - 1]) return 0;
  }
  return f.size() % 2 == 0 ? 1 : -1;
}

inline i64 phi(i64 n) {
  i64 c = 0;
  for (i64 a = 1; a <= n; ++a) c += std::gcd(a, n) == 1;
  return c;
}

inline std::complex<double> geometric_direct(double beta, i64 x) {
  std::complex<long double> acc = 0.0L;
  for (i64 n = 1; n <= x; ++n) {
    const long double t = static_cast<long double>(beta) * static_cast<long double>(n);
    const long double a = 2.0L * std::numbers::pi_v<long double> * (t - std::floor(t));
    acc += std::complex<long double>(std::cos(a), std::sin(a));
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

struct Approx {
  i64 a;
  i64 q;
};

/// Smallest q <= Q with |q alpha - a| <= 1/Q, by exhaustive scan.
inline Approx smallest_approximation(double alpha, i64 q_max) {
  for (i64 q = 1; q <= q_max; ++q) {
    const long double qa = static_cast<long double>(q) * alpha;
    const long double a = std::nearbyint(qa);
    if (std::abs(qa - a) <= 1.0L / static_cast<long double>(q_max)) {
      return {static_cast<i64>(a), q};
    }
  }
  return {0, 0};
}

/// Naive full correlation sum_{n in (x, x+len]} f(n) g(n+h) from dense arrays,
/// f indexed from x+1 and g from g_start+1.
inline double correlation(const std::vector<double>& f, i64 x, const std::vector<double>& g,
                          i64 g_start, i64 h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const i64 n = x + 1 + static_cast<i64>(i);
    const i64 j = n + h - g_start - 1;
    if (j >= 0 && j < static_cast<i64>(g.size())) acc += f[i] * g[static_cast<std::size_t>(j)];
  }
  return acc;
}

}  // namespace oracle
