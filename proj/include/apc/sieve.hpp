#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

// Segmented smallest-prime-factor sieve and the classifications built on it:
// primes, E2 numbers n = p1*p2 whose smaller factor lies in a prescribed
// interval, their log-weights, and the von Mangoldt function.
//
// Every window is half-open on the left: (start, start + len].
namespace apc::sieve {

using i64 = std::int64_t;

/// Upper end of any sieved window. Base primes are kept up to its square root.
inline constexpr i64 kMaxWindowEnd = i64{1} << 44;

class SieveSegment {
 public:
  SieveSegment() = default;
  /// Adopts a raw table: entry i is spf(start + 1 + i), or 0 when that integer is prime.
  SieveSegment(i64 start, std::vector<std::uint32_t> raw);

  i64 start() const noexcept { return start_; }
  i64 len() const noexcept { return static_cast<i64>(raw_.size()); }
  i64 end() const noexcept { return start_ + len(); }
  bool contains(i64 n) const noexcept { return n > start_ && n <= end(); }

  /// Smallest prime factor of n; equals n exactly when n is prime.
  i64 spf(i64 n) const;
  bool is_prime(i64 n) const { return spf(n) == n; }

  std::span<const std::uint32_t> raw() const noexcept { return raw_; }

  friend bool operator==(const SieveSegment&, const SieveSegment&) = default;

 private:
  i64 start_ = 0;
  std::vector<std::uint32_t> raw_;
};

/// Admissible range for the smaller prime factor of an E2 number.
/// Restricted(P, Pupper) accepts p1 in (P, Pupper]; Typical(P1, P2) accepts p1 in [P1, P2].
class E2Params {
 public:
  enum class Variant { Restricted, Typical };

  static E2Params restricted(i64 p, i64 p_upper);
  static E2Params typical(i64 p1, i64 p2);

  Variant variant() const noexcept { return variant_; }
  i64 lower() const noexcept { return lo_; }
  i64 upper() const noexcept { return hi_; }

  bool admits(i64 p1) const noexcept {
    return variant_ == Variant::Restricted ? (p1 > lo_ && p1 <= hi_) : (p1 >= lo_ && p1 <= hi_);
  }

  /// The same interval as a half-open (lo, hi] pair of integers.
  std::pair<i64, i64> open_closed() const noexcept {
    return variant_ == Variant::Restricted ? std::pair{lo_, hi_} : std::pair{lo_ - 1, hi_};
  }

  /// Throws ParameterError unless upper()^2 <= window_start, which forces p1 < p2.
  void validate_for_window(i64 window_start) const;

  friend bool operator==(const E2Params&, const E2Params&) = default;

 private:
  E2Params(Variant v, i64 lo, i64 hi) : variant_(v), lo_(lo), hi_(hi) {}

  Variant variant_ = Variant::Restricted;
  i64 lo_ = 0;
  i64 hi_ = 0;
};

enum class WeightKind : std::uint8_t { IndicatorE2, VarPi2, VonMangoldt, PrimeIndicator, Custom };

std::string_view to_string(WeightKind kind) noexcept;

/// True for 0/1-valued kinds, whose correlations are exact integers.
constexpr bool is_indicator(WeightKind kind) noexcept {
  return kind == WeightKind::IndicatorE2 || kind == WeightKind::PrimeIndicator;
}

struct WeightedSeries {
  i64 start = 0;
  std::vector<double> values;
  WeightKind kind = WeightKind::Custom;

  i64 len() const noexcept { return static_cast<i64>(values.size()); }
  i64 end() const noexcept { return start + len(); }
  bool covers(i64 lo_open, i64 hi_closed) const noexcept {
    return lo_open >= start && hi_closed <= end();
  }
  double at(i64 n) const { return values.at(static_cast<std::size_t>(n - start - 1)); }

  /// Restriction to the sub-window (new_start, new_start + new_len].
  WeightedSeries slice(i64 new_start, i64 new_len) const;

  std::size_t support_size() const noexcept;
  double total() const noexcept;

  friend bool operator==(const WeightedSeries&, const WeightedSeries&) = default;
};

/// Smallest-prime-factor table for (start, start + len]. Parallel over fixed chunks.
SieveSegment build_spf_segment(i64 start, i64 len);

struct PrimePair {
  i64 p1;
  i64 p2;
  friend bool operator==(const PrimePair&, const PrimePair&) = default;
};

/// (p1, p2) with p1 <= p2 when Omega(n) = 2, otherwise nullopt.
std::optional<PrimePair> factor_two(i64 n, const SieveSegment& seg);

WeightedSeries indicator_e2(const SieveSegment& seg, const E2Params& params);
/// log p2 on the members of indicator_e2, zero elsewhere.
WeightedSeries weights_varpi2(const SieveSegment& seg, const E2Params& params);
WeightedSeries weights_von_mangoldt(const SieveSegment& seg);
WeightedSeries prime_indicator(const SieveSegment& seg);

/// Exact sum of 1/p over primes p in (lo, hi].
double mertens_sum(i64 lo, i64 hi);
inline double mertens_sum(const E2Params& params) {
  auto [lo, hi] = params.open_closed();
  return mertens_sum(lo, hi);
}

}  // namespace apc::sieve
