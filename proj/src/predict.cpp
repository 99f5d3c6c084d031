#include "apc/predict.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "apc/errors.hpp"
#include "apc/singular.hpp"
#include "apc/summation.hpp"

namespace apc::predict {

namespace {

void require_shift(i64 h) {
  if (h == 0) throw DomainError("predictions are defined for h != 0 only");
}

double series_at(i64 h) {
  const singular::SmallPrimeCache cache(
      std::max<i64>(2, static_cast<i64>(std::sqrt(static_cast<double>(std::abs(h)))) + 1));
  return singular::singular_series(h, cache);
}

void require_x(i64 x) {
  if (x < 1) throw ParameterError(fmt::format("X = {} must be positive", x));
}

}  // namespace

std::string_view to_string(Model model) noexcept {
  switch (model) {
    case Model::WeightedRestricted: return "weighted_restricted";
    case Model::UnweightedRestricted: return "unweighted_restricted";
    case Model::Typical: return "typical";
    case Model::PrimeByE2: return "prime_by_e2";
    case Model::PrimeByE2Weighted: return "prime_by_e2_weighted";
  }
  return "weighted_restricted";
}

double predict_weighted_restricted(i64 h, i64 x, double mertens) {
  require_shift(h);
  require_x(x);
  if (h % 2 != 0) return 0.0;
  return series_at(h) * static_cast<double>(x) * mertens * mertens;
}

double predict_weighted_restricted(i64 h, i64 x, const sieve::E2Params& params) {
  return predict_weighted_restricted(h, x, sieve::mertens_sum(params));
}

double predict_unweighted(i64 h, i64 x, i64 count_f, i64 count_g) {
  require_shift(h);
  require_x(x);
  if (count_f < 0 || count_g < 0) throw ParameterError("counts must be nonnegative");
  if (h % 2 != 0 || count_f == 0 || count_g == 0) return 0.0;
  return series_at(h) * static_cast<double>(count_f) *
         static_cast<double>(count_g) / static_cast<double>(x);
}

double predict_prime_by_e2(i64 h, i64 x, i64 prime_count, i64 e2_count) {
  return predict_unweighted(h, x, prime_count, e2_count);
}

double predict_prime_by_e2_weighted(i64 h, i64 x, double mertens) {
  require_shift(h);
  require_x(x);
  if (h % 2 != 0) return 0.0;
  return series_at(h) * static_cast<double>(x) * mertens;
}

double main_term_density(Model model, i64 x, double mertens, i64 count_f, i64 count_g) {
  require_x(x);
  const double xd = static_cast<double>(x);
  switch (model) {
    case Model::WeightedRestricted: return xd * mertens * mertens;
    case Model::PrimeByE2Weighted: return xd * mertens;
    case Model::UnweightedRestricted:
    case Model::Typical:
    case Model::PrimeByE2:
      if (count_f < 0 || count_g < 0) throw ParameterError("counts must be nonnegative");
      return static_cast<double>(count_f) * static_cast<double>(count_g) / xd;
  }
  return 0.0;
}

PredictionProfile predict_profile(Model model, i64 x, i64 h_max, const sieve::E2Params& params,
                                  i64 count_f, i64 count_g) {
  require_x(x);
  if (h_max < 1) throw DomainError(fmt::format("shift bound H = {} must satisfy H >= 1", h_max));
  PredictionProfile out;
  out.x = x;
  out.h_max = h_max;
  out.model = model;
  out.params = params;
  out.count_f = count_f;
  out.count_g = count_g;
  out.mertens = sieve::mertens_sum(params);
  out.main.assign(static_cast<std::size_t>(2 * h_max + 1), 0.0);

  const auto series = singular::singular_series_range(h_max);
  const double density = main_term_density(model, x, out.mertens, count_f, count_g);
  for (i64 h = 1; h <= h_max; ++h) {
    const double v = series[static_cast<std::size_t>(h - 1)] * density;
    out.main[static_cast<std::size_t>(h_max + h)] = v;
    out.main[static_cast<std::size_t>(h_max - h)] = v;
  }
  return out;
}

double ErrorReport::exceptional_fraction(double tol) const {
  if (relerr_.empty()) return 0.0;
  const auto bad = std::count_if(relerr_.begin(), relerr_.end(),
                                 [tol](double r) { return std::abs(r) > tol; });
  return static_cast<double>(bad) / static_cast<double>(relerr_.size());
}

ErrorReport error_report(const correlate::CorrelationProfile& actual,
                         const PredictionProfile& predicted) {
  if (actual.x != predicted.x || actual.h_max != predicted.h_max) {
    throw ParameterError(fmt::format(
        "profile mismatch: actual (X={}, H={}) vs predicted (X={}, H={})", actual.x,
        actual.h_max, predicted.x, predicted.h_max));
  }
  const i64 h_max = actual.h_max;
  std::vector<i64> shifts;
  std::vector<double> relerr;
  CompensatedSum l2;
  for (i64 h = -h_max; h <= h_max; ++h) {
    if (h == 0) continue;
    const double a = actual.at(h);
    const double m = predicted.at(h);
    l2.add((a - m) * (a - m));
    if (h % 2 != 0) continue;
    shifts.push_back(h);
    if (m > 0.0) {
      relerr.push_back((a - m) / m);
    } else {
      relerr.push_back(a == 0.0 ? 0.0 : ErrorReport::kUnboundedError);
    }
  }
  return ErrorReport(std::move(shifts), std::move(relerr), l2.value());
}

RatioSummary ratio_summary(const correlate::CorrelationProfile& actual,
                           const PredictionProfile& predicted) {
  if (actual.x != predicted.x || actual.h_max != predicted.h_max) {
    throw ParameterError("profile mismatch between actual and predicted");
  }
  std::vector<double> ratios;
  for (i64 h = -actual.h_max; h <= actual.h_max; ++h) {
    if (h == 0 || h % 2 != 0) continue;
    const double m = predicted.at(h);
    if (m > 0.0) ratios.push_back(actual.at(h) / m);
  }
  RatioSummary out;
  out.count = ratios.size();
  if (ratios.empty()) return out;
  out.mean = compensated_total(ratios) / static_cast<double>(ratios.size());
  std::sort(ratios.begin(), ratios.end());
  const std::size_t mid = ratios.size() / 2;
  out.median = ratios.size() % 2 == 1 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
  return out;
}

}  // namespace apc::predict
