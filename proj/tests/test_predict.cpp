#include <doctest.h>

#include <cmath>

#include "apc/errors.hpp"
#include "apc/predict.hpp"
#include "apc/sieve.hpp"
#include "apc/singular.hpp"
#include "oracles.hpp"

using namespace apc;
using predict::i64;
using predict::Model;

namespace {

correlate::CorrelationProfile profile_from(const predict::PredictionProfile& p, double factor) {
  correlate::CorrelationProfile c;
  c.x = p.x;
  c.n = p.x;
  c.h_max = p.h_max;
  c.values = p.main;
  for (double& v : c.values) v *= factor;
  return c;
}

}  // namespace

TEST_CASE("weighted restricted prediction") {
  const auto params = sieve::E2Params::restricted(20, 40);
  CHECK(predict::predict_weighted_restricted(3, 1'000'000, params) == 0.0);
  CHECK(predict::predict_weighted_restricted(-7, 1'000'000, params) == 0.0);
  CHECK(predict::predict_weighted_restricted(6, 1'000'000, params) ==
        2.0 * predict::predict_weighted_restricted(2, 1'000'000, params));
  CHECK(predict::predict_weighted_restricted(2, 1'000'000, params) ==
        doctest::Approx(24870.269624).epsilon(1e-9));
  CHECK(predict::predict_weighted_restricted(2, 1'000'000, params) == doctest::Approx(2.487e4).epsilon(1e-3));
  CHECK_THROWS_AS(predict::predict_weighted_restricted(0, 1'000'000, params), DomainError);
  const singular::SmallPrimeCache cache(1000);
  for (i64 h : {4, 10, 30, 210, 998}) {
    CHECK(predict::predict_weighted_restricted(h, 12345, 0.3) /
              predict::predict_weighted_restricted(2, 12345, 0.3) ==
          doctest::Approx(singular::singular_series(h, cache) / singular::singular_series(2, cache))
              .epsilon(1e-14));
  }
}

TEST_CASE("unweighted and prime-by-E2 predictions") {
  CHECK(predict::predict_unweighted(2, 1000, 0, 50) == 0.0);
  CHECK(predict::predict_unweighted(5, 1000, 40, 50) == 0.0);
  CHECK(predict::predict_prime_by_e2(9, 1000, 40, 50) == 0.0);
  CHECK(predict::predict_prime_by_e2(2, 1000, 40, 0) == 0.0);
  CHECK_THROWS_AS(predict::predict_unweighted(0, 1000, 4, 5), DomainError);
  CHECK_THROWS_AS(predict::predict_prime_by_e2(0, 1000, 4, 5), DomainError);
  CHECK_THROWS_AS(predict::predict_prime_by_e2_weighted(0, 1000, 0.5), DomainError);
  CHECK_THROWS_AS(predict::predict_unweighted(2, 1000, -1, 5), ParameterError);
  CHECK(predict::predict_unweighted(4, 1000, 80, 80) == 4.0 * predict::predict_unweighted(4, 1000, 40, 40));
  CHECK(predict::predict_prime_by_e2_weighted(3, 1000, 0.5) == 0.0);
}

TEST_CASE("plug-in predictions at X = 10^6 with oracle counts") {
  const i64 x = 1'000'000;
  const auto params = sieve::E2Params::restricted(20, 40);
  const auto seg = sieve::build_spf_segment(x, x);
  const auto e2 = sieve::indicator_e2(seg, params).support_size();
  const auto primes = sieve::prime_indicator(seg).support_size();
  std::size_t e2_oracle = 0;
  for (i64 p : {23, 29, 31, 37}) {
    for (i64 m = x / p + 1; m <= 2 * x / p; ++m) e2_oracle += oracle::is_prime(m);
  }
  CHECK(e2 == e2_oracle);
  CHECK(primes == 70435);
  const double s2 = 2.0 * singular::twin_prime_constant();
  CHECK(predict::predict_unweighted(2, x, static_cast<i64>(e2), static_cast<i64>(e2)) ==
        doctest::Approx(s2 * static_cast<double>(e2 * e2) / 1e6).epsilon(1e-13));
  CHECK(predict::predict_prime_by_e2(2, x, 70435, static_cast<i64>(e2)) ==
        doctest::Approx(s2 * 70435.0 * static_cast<double>(e2) / 1e6).epsilon(1e-13));
}

TEST_CASE("prediction profiles") {
  const auto params = sieve::E2Params::restricted(5, 25);
  const auto p = predict::predict_profile(Model::WeightedRestricted, 1000, 40, params);
  CHECK(p.main.size() == 81);
  CHECK(p.at(0) == 0.0);
  CHECK(p.mertens == doctest::Approx(sieve::mertens_sum(5, 25)));
  for (i64 h = -40; h <= 40; ++h) {
    CHECK(p.at(h) >= 0.0);
    if (h % 2 != 0) CHECK(p.at(h) == 0.0);
    if (h != 0) {
      CHECK(p.at(h) == doctest::Approx(predict::predict_weighted_restricted(h, 1000, params)).epsilon(1e-14));
    }
  }
  const auto q = predict::predict_profile(Model::Typical, 1000, 10, sieve::E2Params::typical(5, 25), 30, 40);
  CHECK(q.at(2) == doctest::Approx(predict::predict_unweighted(2, 1000, 30, 40)));
  const auto r = predict::predict_profile(Model::PrimeByE2Weighted, 1000, 10, params);
  CHECK(r.at(-4) == doctest::Approx(predict::predict_prime_by_e2_weighted(4, 1000, r.mertens)));
  CHECK_THROWS_AS(predict::predict_profile(Model::Typical, 1000, 0, params), DomainError);
  CHECK(predict::main_term_density(Model::PrimeByE2, 100, 0.0, 10, 20) == 2.0);
}

TEST_CASE("error reports") {
  const auto params = sieve::E2Params::restricted(5, 25);
  const auto p = predict::predict_profile(Model::WeightedRestricted, 1000, 20, params);

  const auto same = predict::error_report(profile_from(p, 1.0), p);
  CHECK(same.l2() == 0.0);
  CHECK(same.shifts().size() == 20);
  for (double r : same.relerr()) CHECK(r == 0.0);

  const auto up = predict::error_report(profile_from(p, 1.1), p);
  for (double r : up.relerr()) CHECK(r == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(up.exceptional_fraction(0.05) == 1.0);
  CHECK(up.exceptional_fraction(0.2) == 0.0);

  // relerr is unchanged when actual and predicted are rescaled together
  auto p3 = p;
  for (double& v : p3.main) v *= 3.0;
  const auto scaled = predict::error_report(profile_from(p3, 1.1), p3);
  for (std::size_t i = 0; i < scaled.relerr().size(); ++i) {
    CHECK(scaled.relerr()[i] == doctest::Approx(up.relerr()[i]).epsilon(1e-12));
  }

  const predict::ErrorReport manual({2, 4, 6}, {0.1, 0.3, 0.05}, 0.0);
  CHECK(manual.exceptional_fraction(0.2) == doctest::Approx(1.0 / 3.0));

  auto odd_mass = profile_from(p, 1.0);
  odd_mass.values[static_cast<std::size_t>(20 + 3)] = 5.0;
  const auto with_odd = predict::error_report(odd_mass, p);
  CHECK(with_odd.l2() == 25.0);
  CHECK(with_odd.shifts().size() == 20);

  auto zero_main = p;
  zero_main.main[static_cast<std::size_t>(20 + 2)] = 0.0;
  zero_main.main[static_cast<std::size_t>(20 + 4)] = 0.0;
  auto act = profile_from(p, 1.0);
  act.values[static_cast<std::size_t>(20 + 4)] = 0.0;
  const auto inf_rep = predict::error_report(act, zero_main);
  const auto it2 = std::find(inf_rep.shifts().begin(), inf_rep.shifts().end(), 2);
  const auto it4 = std::find(inf_rep.shifts().begin(), inf_rep.shifts().end(), 4);
  CHECK(std::isinf(inf_rep.relerr()[static_cast<std::size_t>(it2 - inf_rep.shifts().begin())]));
  CHECK(inf_rep.relerr()[static_cast<std::size_t>(it4 - inf_rep.shifts().begin())] == 0.0);
  CHECK(inf_rep.exceptional_fraction(1e6) == doctest::Approx(1.0 / 20.0));

  auto other = profile_from(p, 1.0);
  other.h_max = 10;
  CHECK_THROWS_AS(predict::error_report(other, p), ParameterError);
  other = profile_from(p, 1.0);
  other.x = 999;
  CHECK_THROWS_AS(predict::error_report(other, p), ParameterError);
}

TEST_CASE("ratio summary") {
  const auto params = sieve::E2Params::restricted(5, 25);
  const auto p = predict::predict_profile(Model::WeightedRestricted, 1000, 20, params);
  const auto s = predict::ratio_summary(profile_from(p, 0.9), p);
  CHECK(s.count == 20);
  CHECK(s.mean == doctest::Approx(0.9));
  CHECK(s.median == doctest::Approx(0.9));
}
