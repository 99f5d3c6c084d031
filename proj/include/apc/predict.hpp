#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "apc/correlate.hpp"
#include "apc/sieve.hpp"

// Main-term predictions S(h) * (density product) for correlation profiles, and
// the per-shift error accounting used to size the exceptional set of shifts.
namespace apc::predict {

using i64 = std::int64_t;

enum class Model {
  WeightedRestricted,    // S(h) X (sum_{p in range} 1/p)^2
  UnweightedRestricted,  // S(h) count_f count_g / X
  Typical,               // same form as UnweightedRestricted on typical E2
  PrimeByE2,             // S(h) prime_count e2_count / X
  PrimeByE2Weighted,     // S(h) X sum_{p in range} 1/p
};

std::string_view to_string(Model model) noexcept;

double predict_weighted_restricted(i64 h, i64 x, const sieve::E2Params& params);
/// Same, with the Mertens sum supplied (avoids re-sieving it for every h).
double predict_weighted_restricted(i64 h, i64 x, double mertens);

double predict_unweighted(i64 h, i64 x, i64 count_f, i64 count_g);
double predict_prime_by_e2(i64 h, i64 x, i64 prime_count, i64 e2_count);
double predict_prime_by_e2_weighted(i64 h, i64 x, double mertens);

/// The factor multiplying S(h) in each model's main term.
double main_term_density(Model model, i64 x, double mertens, i64 count_f, i64 count_g);

struct PredictionProfile {
  i64 x = 0;
  i64 h_max = 0;
  std::vector<double> main;  // main[h + h_max]; the h = 0 slot is unused and 0
  Model model = Model::WeightedRestricted;
  sieve::E2Params params = sieve::E2Params::restricted(2, 3);
  double mertens = 0.0;
  i64 count_f = 0;
  i64 count_g = 0;

  double at(i64 h) const { return main.at(static_cast<std::size_t>(h + h_max)); }
};

/// Main terms for every 0 < |h| <= H. Only the inputs the model uses are read.
PredictionProfile predict_profile(Model model, i64 x, i64 h_max, const sieve::E2Params& params,
                                  i64 count_f = 0, i64 count_g = 0);

/// Relative errors over even shifts and their L2 summary.
class ErrorReport {
 public:
  static constexpr double kUnboundedError = std::numeric_limits<double>::infinity();

  ErrorReport() = default;
  ErrorReport(std::vector<i64> even_shifts, std::vector<double> relerr, double l2)
      : shifts_(std::move(even_shifts)), relerr_(std::move(relerr)), l2_(l2) {}

  const std::vector<i64>& shifts() const noexcept { return shifts_; }
  const std::vector<double>& relerr() const noexcept { return relerr_; }
  double l2() const noexcept { return l2_; }

  /// Share of even shifts with |relerr| > tol (the +inf sentinel always counts).
  double exceptional_fraction(double tol) const;

 private:
  std::vector<i64> shifts_;
  std::vector<double> relerr_;
  double l2_ = 0.0;
};

/// relerr(h) = (actual - main) / main over even h; 0 when both vanish, +inf when
/// only main does. l2 sums (actual - main)^2 over all 0 < |h| <= H.
ErrorReport error_report(const correlate::CorrelationProfile& actual,
                         const PredictionProfile& predicted);

struct RatioSummary {
  double mean = 0.0;
  double median = 0.0;
  std::size_t count = 0;
};

/// actual / main over even h with main > 0.
RatioSummary ratio_summary(const correlate::CorrelationProfile& actual,
                           const PredictionProfile& predicted);

}  // namespace apc::predict
