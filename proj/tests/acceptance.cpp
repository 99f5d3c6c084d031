// Acceptance run: one PASS / FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "apc/arith.hpp"
#include "apc/circle.hpp"
#include "apc/correlate.hpp"
#include "apc/dirichlet.hpp"
#include "apc/errors.hpp"
#include "apc/runner.hpp"
#include "apc/sieve.hpp"
#include "apc/singular.hpp"

using namespace apc;
using i64 = std::int64_t;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = r.ok && in_time;
  if (!pass) ++failures;
  fmt::print("{} criterion {:2d} {}: {} [{:.2f} s of {:.0f} s{}]\n", pass ? "PASS" : "FAIL", id, title,
             r.detail, secs, budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

sieve::WeightedSeries random_indicator(std::mt19937_64& rng, i64 start, i64 len, double density) {
  std::bernoulli_distribution bit(density);
  sieve::WeightedSeries w;
  w.start = start;
  w.kind = sieve::WeightKind::IndicatorE2;
  w.values.resize(static_cast<std::size_t>(len));
  for (double& v : w.values) v = bit(rng) ? 1.0 : 0.0;
  return w;
}

Outcome backend_exactness() {
  std::mt19937_64 rng(20241);
  int mismatched = 0;
  i64 largest = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const i64 x = std::uniform_int_distribution<i64>(2, 10'000)(rng);
    const i64 h = std::uniform_int_distribution<i64>(1, std::min<i64>(500, x - 1))(rng);
    const double density = std::uniform_real_distribution<double>(0.02, 0.9)(rng);
    const auto f = random_indicator(rng, x, x, density);
    const auto g = random_indicator(rng, x - h, x + 2 * h, density);
    const auto a = correlate::correlate_direct(f, g, h);
    const auto b = correlate::correlate_fft(f, g, h);
    mismatched += a.values != b.values;
    largest = std::max(largest, x);
  }
  return {mismatched == 0, fmt::format("{} of 100 instances differ (largest X = {})", mismatched, largest)};
}

Outcome parseval() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    sieve::WeightedSeries w;
    const i64 len = std::uniform_int_distribution<i64>(1, 2048)(rng);
    w.start = std::uniform_int_distribution<i64>(0, 10'000'000)(rng);
    w.values.resize(static_cast<std::size_t>(len));
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    for (double& v : w.values) v = val(rng);
    const i64 m = len + std::uniform_int_distribution<i64>(0, 300)(rng);
    const auto r = circle::discrete_parseval(w, m);
    worst = std::max(worst, std::abs(r.lhs - r.rhs) / r.rhs);
  }
  const auto seg = sieve::build_spf_segment(1'000'000, 2048);
  const auto varpi = sieve::weights_varpi2(seg, sieve::E2Params::restricted(20, 40));
  const auto r = circle::discrete_parseval(varpi, 2048);
  const double rel = std::abs(r.lhs - r.rhs) / r.rhs;
  return {worst <= 1e-9 && rel <= 1e-9,
          fmt::format("worst random gap {:.3g}, varpi2 gap {:.3g}", worst, rel)};
}

Outcome singular_consistency() {
  const i64 h_max = 10'000;
  const auto exact = singular::singular_series_range(h_max);
  std::vector<i64> even;
  for (i64 h = 2; h <= h_max; h += 2) even.push_back(h);
  std::vector<double> mae;
  for (i64 q0 : {1'000, 10'000, 100'000}) {
    const auto t = singular::truncated_singular_series(even, q0);
    double acc = 0.0;
    for (std::size_t i = 0; i < even.size(); ++i) {
      acc += std::abs(t[i] - exact[static_cast<std::size_t>(even[i] - 1)]);
    }
    mae.push_back(acc / static_cast<double>(even.size()));
  }
  const bool decreasing = mae[0] > mae[1] && mae[1] > mae[2];
  return {decreasing && mae[2] <= 0.05,
          fmt::format("mean |error| at Q0 = 1e3, 1e4, 1e5: {:.5f}, {:.5f}, {:.5f}", mae[0], mae[1], mae[2])};
}

Outcome singular_average() {
  const double avg = singular::singular_series_average(1'000'000) / 1e6;
  return {avg >= 0.95 && avg <= 1.05, fmt::format("average {:.8f}", avg)};
}

Outcome restricted_average() {
  runner::ExperimentConfig cfg;
  cfg.x = 10'000'000;
  cfg.h = 10'000;
  cfg.params = sieve::E2Params::restricted(50, 100);
  cfg.pair = correlate::PairKind::E2xE2Restricted;
  const auto b = runner::run_experiment(cfg);
  const auto& s = b.summary;
  const bool ok = s.median_ratio >= 0.85 && s.median_ratio <= 1.15 && s.exceptional_25 <= 0.10;
  // Diagnostic only: split the exceptional shifts by whether some p in (P, Pupper]
  // divides h, where n and n + h can share their small factor.
  std::size_t shared = 0, shared_bad = 0, coprime = 0, coprime_bad = 0;
  for (std::size_t i = 0; i < b.errors.shifts().size(); ++i) {
    const i64 h = std::abs(b.errors.shifts()[i]);
    bool divisible = false;
    for (i64 p = 51; p <= 100; ++p) divisible = divisible || (arith::is_prime(p) && h % p == 0);
    const bool bad = std::abs(b.errors.relerr()[i]) > 0.25;
    (divisible ? shared : coprime) += 1;
    (divisible ? shared_bad : coprime_bad) += bad;
  }
  return {ok, fmt::format("median ratio {:.4f}, mean ratio {:.4f}, exceptional(0.25) {:.4f}, "
                          "exceptional(0.10) {:.4f}; exceptional(0.25) is {}/{} on h with a "
                          "factor in (50, 100] and {}/{} elsewhere",
                          s.median_ratio, s.mean_ratio, s.exceptional_25, s.exceptional_10,
                          shared_bad, shared, coprime_bad, coprime)};
}

Outcome prime_by_e2() {
  runner::ExperimentConfig cfg;
  cfg.x = 10'000'000;
  cfg.h = 10'000;
  cfg.params = sieve::E2Params::typical(50, 3000);
  cfg.pair = correlate::PairKind::PrimeXE2;
  cfg.weighting = correlate::Weighting::Weighted;
  const auto b = runner::run_experiment(cfg);
  const auto& s = b.summary;
  return {s.median_ratio >= 0.85 && s.median_ratio <= 1.15,
          fmt::format("median ratio {:.4f}, mean ratio {:.4f}, exceptional(0.25) {:.4f}", s.median_ratio,
                      s.mean_ratio, s.exceptional_25)};
}

Outcome factorisation() {
  std::mt19937_64 rng(5150);
  double worst = 0.0;
  std::size_t boundary = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const i64 x = std::uniform_int_distribution<i64>(30, 10'000)(rng);
    const i64 root = static_cast<i64>(arith::isqrt(static_cast<arith::u64>(x)));
    const i64 upper = std::uniform_int_distribution<i64>(3, root)(rng);
    const i64 p = std::uniform_int_distribution<i64>(2, upper - 1)(rng);
    const double u = std::uniform_real_distribution<double>(1.0, 40.0)(rng);
    const i64 q = std::uniform_int_distribution<i64>(1, 30)(rng);
    const auto table = dirichlet::characters_mod_q(q);
    const auto& chi = table.chars[std::uniform_int_distribution<std::size_t>(0, table.chars.size() - 1)(rng)];
    const dirichlet::cplx s{std::uniform_real_distribution<double>(0.0, 2.0)(rng),
                            std::uniform_real_distribution<double>(-20.0, 20.0)(rng)};
    const auto r = dirichlet::factorization_check(x, sieve::E2Params::restricted(p, upper), u, s, chi);
    worst = std::max(worst, r.residual);
    boundary += r.boundary_terms;
  }
  return {worst < 1e-9, fmt::format("support and bound held on 20 instances; worst residual {:.3g}, "
                                    "{} boundary terms in total",
                                    worst, boundary)};
}

Outcome characters() {
  double worst = 0.0;
  for (i64 q = 1; q <= 200; ++q) {
    const auto table = dirichlet::characters_mod_q(q);
    const auto phi = static_cast<double>(arith::euler_phi(q));
    if (static_cast<double>(table.chars.size()) != phi) return {false, fmt::format("q = {}: wrong count", q)};
    std::vector<std::vector<dirichlet::cplx>> v;
    for (const auto& chi : table.chars) v.push_back(chi.table());
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        dirichlet::cplx acc = 0.0;
        for (i64 a = 0; a < q; ++a) acc += v[i][a] * std::conj(v[j][a]);
        worst = std::max(worst, std::abs(acc - (i == j ? phi : 0.0)));
      }
    }
    for (i64 a = 0; a < q; ++a) {
      for (i64 b = a; b < q; ++b) {
        dirichlet::cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += v[i][a] * std::conj(v[i][b]);
        const bool diag = a == b && std::gcd(a, q) == 1;
        worst = std::max(worst, std::abs(acc - (diag ? phi : 0.0)));
      }
    }
    const auto tau0 = dirichlet::gauss_sum(table.chars.front());
    worst = std::max(worst, std::abs(tau0 - static_cast<double>(arith::mobius(q))));
    if (q <= 100 && arith::is_prime(q)) {
      for (std::size_t i = 1; i < n; ++i) {
        worst = std::max(worst, std::abs(std::norm(dirichlet::gauss_sum(table.chars[i])) - static_cast<double>(q)));
      }
    }
  }
  return {worst <= 1e-10, fmt::format("worst deviation {:.3g} over q <= 200", worst)};
}

Outcome arcs() {
  std::string detail;
  bool ok = true;
  for (auto [q0, q] : {std::pair<i64, i64>{2, 100}, {5, 200}, {10, 1000}}) {
    const auto p = circle::ArcParams::make(q0, q);
    const double m = circle::major_arc_measure(p);
    const double f = circle::major_arc_frequency(p, 1'000'000, 2024);
    const double rel = std::abs(f - m) / m;
    ok = ok && rel <= 0.02;
    detail += fmt::format("{}({},{}): measure {:.6f} freq {:.6f}", detail.empty() ? "" : "; ", q0, q, m, f);
  }
  return {ok, detail};
}

Outcome geometric() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> beta(-3.0, 3.0);
  std::uniform_int_distribution<i64> len(1, 1'000'000);
  double worst = 0.0;  // max of |sum| / bound
  for (int i = 0; i < 1000; ++i) {
    // mix in tiny and near-integral beta, where the two bounds trade places
    double b = beta(rng);
    if (i % 4 == 1) b = std::ldexp(b, -20);
    if (i % 4 == 2) b = std::round(b) + std::ldexp(b, -12);
    const i64 x = len(rng);
    const double d = circle::dist_to_int(b);
    const double bound = std::min(static_cast<double>(x), d > 0.0 ? 1.0 / (2.0 * d) : INFINITY);
    worst = std::max(worst, std::abs(circle::geometric_phase_sum(b, x)) / bound);
  }
  return {worst <= 1.0 + 1e-12, fmt::format("max |sum| / bound = {:.12f}", worst)};
}

}  // namespace

int main() {
  criterion(1, "fft and direct backends agree exactly", 10, backend_exactness);
  criterion(2, "discrete Parseval identity", 5, parseval);
  criterion(3, "truncated singular series converges", 60, singular_consistency);
  criterion(4, "singular series average", 30, singular_average);
  criterion(5, "restricted E2 correlations on average", 300, restricted_average);
  criterion(6, "prime by E2 correlations", 300, prime_by_e2);
  criterion(7, "factorisation identity", 30, factorisation);
  criterion(8, "character orthogonality and Gauss sums", 10, characters);
  criterion(9, "major-arc Monte Carlo frequency", 30, arcs);
  criterion(10, "geometric-sum bound", 1, geometric);
  fmt::print("{} of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
