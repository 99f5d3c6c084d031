#include "apc/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "apc/arith.hpp"
#include "apc/errors.hpp"
#include "apc/summation.hpp"

namespace apc::sieve {

namespace {

constexpr i64 kChunk = i64{1} << 18;

// Primality flags for 0..bound, used to finish p1 * m factorisations in bulk.
std::vector<std::uint8_t> prime_flags(i64 bound) {
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(bound) + 1, 1);
  flags[0] = 0;
  if (bound >= 1) flags[1] = 0;
  for (i64 i = 2; i * i <= bound; ++i) {
    if (!flags[i]) continue;
    for (i64 j = i * i; j <= bound; j += i) flags[j] = 0;
  }
  return flags;
}

void check_window(i64 start, i64 len) {
  if (start < 1) throw RangeError(fmt::format("sieve window start {} must be >= 1", start));
  if (len < 1) throw RangeError(fmt::format("sieve window length {} must be >= 1", len));
  if (start > kMaxWindowEnd - len) {
    throw RangeError(fmt::format("sieve window ({}, {} + {}] exceeds the supported bound {}", start,
                                 start, len, kMaxWindowEnd));
  }
}

enum class E2Output { Indicator, LogCofactor };

WeightedSeries classify_e2(const SieveSegment& seg, const E2Params& params, E2Output out) {
  params.validate_for_window(seg.start());
  WeightedSeries series;
  series.start = seg.start();
  series.kind = out == E2Output::Indicator ? WeightKind::IndicatorE2 : WeightKind::VarPi2;
  series.values.assign(static_cast<std::size_t>(seg.len()), 0.0);

  const i64 smallest_p1 = params.variant() == E2Params::Variant::Restricted ? params.lower() + 1
                                                                            : params.lower();
  const i64 cofactor_bound = seg.end() / std::max<i64>(smallest_p1, 2);
  const auto flags = prime_flags(cofactor_bound);
  const auto raw = seg.raw();
  const i64 len = seg.len();

#pragma omp parallel for schedule(static)
  for (i64 i = 0; i < len; ++i) {
    const std::uint32_t p = raw[static_cast<std::size_t>(i)];
    if (p == 0 || !params.admits(p)) continue;
    const i64 n = seg.start() + 1 + i;
    const i64 m = n / p;
    if (!flags[static_cast<std::size_t>(m)]) continue;
    series.values[static_cast<std::size_t>(i)] =
        out == E2Output::Indicator ? 1.0 : std::log(static_cast<double>(m));
  }
  return series;
}

}  // namespace

SieveSegment::SieveSegment(i64 start, std::vector<std::uint32_t> raw)
    : start_(start), raw_(std::move(raw)) {}

i64 SieveSegment::spf(i64 n) const {
  if (!contains(n)) {
    throw RangeError(fmt::format("{} outside sieve window ({}, {}]", n, start_, end()));
  }
  const std::uint32_t p = raw_[static_cast<std::size_t>(n - start_ - 1)];
  return p == 0 ? n : static_cast<i64>(p);
}

E2Params E2Params::restricted(i64 p, i64 p_upper) {
  if (p < 2 || p_upper <= p) {
    throw ParameterError(
        fmt::format("restricted E2 parameters need 2 <= P < Pupper, got P={}, Pupper={}", p,
                    p_upper));
  }
  return E2Params(Variant::Restricted, p, p_upper);
}

E2Params E2Params::typical(i64 p1, i64 p2) {
  if (p1 < 2 || p2 < p1) {
    throw ParameterError(
        fmt::format("typical E2 parameters need 2 <= P1 <= P2, got P1={}, P2={}", p1, p2));
  }
  return E2Params(Variant::Typical, p1, p2);
}

void E2Params::validate_for_window(i64 window_start) const {
  // n > window_start >= upper^2 makes the cofactor exceed every admissible p1.
  if (hi_ > static_cast<i64>(arith::isqrt(static_cast<arith::u64>(std::max<i64>(window_start, 0))))) {
    throw ParameterError(fmt::format(
        "{}^2 = {} exceeds the window start {}: the small-factor bound must satisfy {}^2 <= X",
        variant_ == Variant::Restricted ? "Pupper" : "P2", hi_ * hi_, window_start,
        variant_ == Variant::Restricted ? "Pupper" : "P2"));
  }
}

std::string_view to_string(WeightKind kind) noexcept {
  switch (kind) {
    case WeightKind::IndicatorE2: return "indicator_e2";
    case WeightKind::VarPi2: return "varpi2";
    case WeightKind::VonMangoldt: return "von_mangoldt";
    case WeightKind::PrimeIndicator: return "prime_indicator";
    case WeightKind::Custom: return "custom";
  }
  return "custom";
}

WeightedSeries WeightedSeries::slice(i64 new_start, i64 new_len) const {
  if (new_len < 0 || !covers(new_start, new_start + new_len)) {
    throw RangeError(fmt::format("slice ({}, {}] not inside series window ({}, {}]", new_start,
                                 new_start + new_len, start, end()));
  }
  WeightedSeries out;
  out.start = new_start;
  out.kind = kind;
  const auto first = values.begin() + (new_start - start);
  out.values.assign(first, first + new_len);
  return out;
}

std::size_t WeightedSeries::support_size() const noexcept {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(),
                                                [](double v) { return v != 0.0; }));
}

double WeightedSeries::total() const noexcept { return compensated_total(values); }

SieveSegment build_spf_segment(i64 start, i64 len) {
  check_window(start, len);
  const i64 end = start + len;
  const auto base = arith::primes_up_to(static_cast<i64>(arith::isqrt(static_cast<arith::u64>(end))));
  std::vector<std::uint32_t> raw(static_cast<std::size_t>(len), 0);
  const i64 chunks = (len + kChunk - 1) / kChunk;

#pragma omp parallel for schedule(static)
  for (i64 c = 0; c < chunks; ++c) {
    const i64 lo = start + 1 + c * kChunk;  // first integer of the chunk
    const i64 hi = std::min(end, lo + kChunk - 1);
    for (i64 p : base) {
      if (p * p > hi) break;
      i64 m = std::max(p * p, ((lo + p - 1) / p) * p);
      for (; m <= hi; m += p) {
        auto& slot = raw[static_cast<std::size_t>(m - start - 1)];
        if (slot == 0) slot = static_cast<std::uint32_t>(p);
      }
    }
  }
  return SieveSegment(start, std::move(raw));
}

std::optional<PrimePair> factor_two(i64 n, const SieveSegment& seg) {
  const i64 p = seg.spf(n);
  if (p == n) return std::nullopt;
  const i64 m = n / p;
  const bool cofactor_prime =
      seg.contains(m) ? seg.is_prime(m) : arith::is_prime(static_cast<arith::u64>(m));
  if (!cofactor_prime) return std::nullopt;
  return PrimePair{p, m};
}

WeightedSeries indicator_e2(const SieveSegment& seg, const E2Params& params) {
  return classify_e2(seg, params, E2Output::Indicator);
}

WeightedSeries weights_varpi2(const SieveSegment& seg, const E2Params& params) {
  return classify_e2(seg, params, E2Output::LogCofactor);
}

WeightedSeries weights_von_mangoldt(const SieveSegment& seg) {
  WeightedSeries series;
  series.start = seg.start();
  series.kind = WeightKind::VonMangoldt;
  series.values.assign(static_cast<std::size_t>(seg.len()), 0.0);
  const auto raw = seg.raw();
  const i64 len = seg.len();

#pragma omp parallel for schedule(static)
  for (i64 i = 0; i < len; ++i) {
    const i64 n = seg.start() + 1 + i;
    const i64 p = raw[static_cast<std::size_t>(i)] == 0 ? n : raw[static_cast<std::size_t>(i)];
    i64 r = n;
    while (r % p == 0) r /= p;
    if (r == 1) series.values[static_cast<std::size_t>(i)] = std::log(static_cast<double>(p));
  }
  return series;
}

WeightedSeries prime_indicator(const SieveSegment& seg) {
  WeightedSeries series;
  series.start = seg.start();
  series.kind = WeightKind::PrimeIndicator;
  series.values.resize(static_cast<std::size_t>(seg.len()));
  const auto raw = seg.raw();
  for (std::size_t i = 0; i < raw.size(); ++i) series.values[i] = raw[i] == 0 ? 1.0 : 0.0;
  return series;
}

double mertens_sum(i64 lo, i64 hi) {
  if (lo < 1 || hi < lo) {
    throw ParameterError(fmt::format("mertens_sum needs 1 <= lo <= hi, got ({}, {}]", lo, hi));
  }
  if (hi == lo) return 0.0;
  const auto seg = build_spf_segment(lo, hi - lo);
  CompensatedSum acc;
  for (i64 n = lo + 1; n <= hi; ++n) {
    if (seg.is_prime(n)) acc.add(1.0 / static_cast<double>(n));
  }
  return acc.value();
}

}  // namespace apc::sieve
