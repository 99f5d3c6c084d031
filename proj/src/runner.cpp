#include "apc/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <omp.h>
#include <random>

#include "apc/arith.hpp"
#include "apc/cache.hpp"
#include "apc/dirichlet.hpp"
#include "apc/errors.hpp"
#include "apc/singular.hpp"

namespace apc::runner {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.12g}", v);
}

void append_row(std::string& out, i64 h, std::optional<int> sign, const ReportBundle& b) {
  const bool even = h % 2 == 0;
  const i64 signed_h = sign ? *sign * h : h;
  const double series = b.series[static_cast<std::size_t>(std::abs(signed_h) - 1)];
  std::string relerr;
  if (even) {
    const auto& shifts = b.errors.shifts();
    const auto it = std::lower_bound(shifts.begin(), shifts.end(), signed_h);
    relerr = num(b.errors.relerr()[static_cast<std::size_t>(it - shifts.begin())]);
  }
  out += std::to_string(h);
  if (sign) out += fmt::format(",{}", *sign);
  out += fmt::format(",{},{},{},{},{}\n", even ? "even" : "odd", num(b.actual.profile.at(signed_h)),
                     num(b.predicted.at(signed_h)), relerr, num(series));
}

}  // namespace

sieve::SieveSegment cached_segment(const std::filesystem::path& cache_dir, i64 start, i64 len) {
  if (cache_dir.empty()) return sieve::build_spf_segment(start, len);
  const auto path = cache_dir / fmt::format("spf_{}_{}.apc", start, len);
  if (std::filesystem::exists(path)) {
    auto payload = cache::load_cache(path);
    if (auto* seg = std::get_if<sieve::SieveSegment>(&payload)) {
      if (seg->start() == start && seg->len() == len) return std::move(*seg);
    }
    throw FormatError(fmt::format("{} does not hold the segment ({}, {}]", path.string(), start,
                                  start + len));
  }
  auto seg = sieve::build_spf_segment(start, len);
  std::filesystem::create_directories(cache_dir);
  cache::save_cache(path, seg);
  return seg;
}

ReportBundle run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  const i64 x = cfg.x;
  const i64 h = cfg.h;

  ReportBundle b;
  const auto seg = cached_segment(cfg.cache_dir, x - h, x + 2 * h);
  b.actual = correlate::correlate_weighted_pair(cfg.pair, x, h, cfg.params, seg, cfg.weighting,
                                                cfg.backend);
  const auto model = model_for(cfg);
  const auto cf = static_cast<i64>(b.actual.count_f);
  const auto cg = static_cast<i64>(b.actual.count_g);
  b.predicted = predict::predict_profile(model, x, h, cfg.params, cf, cg);

  if (cfg.singular_q0) {
    std::vector<i64> shifts(static_cast<std::size_t>(h));
    for (i64 k = 1; k <= h; ++k) shifts[static_cast<std::size_t>(k - 1)] = k;
    b.series = singular::truncated_singular_series(shifts, *cfg.singular_q0);
    const double density = predict::main_term_density(model, x, b.predicted.mertens, cf, cg);
    for (i64 k = 1; k <= h; ++k) {
      const double v = density * b.series[static_cast<std::size_t>(k - 1)];
      b.predicted.main[static_cast<std::size_t>(h + k)] = v;
      b.predicted.main[static_cast<std::size_t>(h - k)] = v;
    }
  } else {
    b.series = singular::singular_series_range(h);
  }

  b.errors = predict::error_report(b.actual.profile, b.predicted);
  const auto ratios = predict::ratio_summary(b.actual.profile, b.predicted);
  auto& s = b.summary;
  s.x = x;
  s.h_max = h;
  s.count_f = b.actual.count_f;
  s.count_g = b.actual.count_g;
  s.mertens = b.predicted.mertens;
  s.mean_ratio = ratios.mean;
  s.median_ratio = ratios.median;
  s.exceptional_10 = b.errors.exceptional_fraction(0.10);
  s.exceptional_25 = b.errors.exceptional_fraction(0.25);
  s.exceptional_50 = b.errors.exceptional_fraction(0.50);
  s.l2 = b.errors.l2();
  b.csv = format_csv(b, cfg.fold_signs);
  b.json = format_json(s);
  return b;
}

std::string format_csv(const ReportBundle& b, bool fold_signs) {
  const i64 h_max = b.actual.profile.h_max;
  std::string out;
  out.reserve(static_cast<std::size_t>(h_max) * 160);
  if (fold_signs) {
    out += "h,sign,parity,actual,predicted,relerr,singular_series\n";
    for (i64 h = 1; h <= h_max; ++h) {
      append_row(out, h, -1, b);
      append_row(out, h, 1, b);
    }
  } else {
    out += "h,parity,actual,predicted,relerr,singular_series\n";
    for (i64 h = -h_max; h <= h_max; ++h) {
      if (h != 0) append_row(out, h, std::nullopt, b);
    }
  }
  return out;
}

std::string format_json(const Summary& s) {
  nlohmann::ordered_json j;
  j["x"] = s.x;
  j["h_max"] = s.h_max;
  j["count_f"] = s.count_f;
  j["count_g"] = s.count_g;
  j["mertens"] = s.mertens;
  j["mean_ratio"] = s.mean_ratio;
  j["median_ratio"] = s.median_ratio;
  j["exceptional_0.10"] = s.exceptional_10;
  j["exceptional_0.25"] = s.exceptional_25;
  j["exceptional_0.50"] = s.exceptional_50;
  j["l2"] = s.l2;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_report(const ReportBundle& bundle,
                                                const std::filesystem::path& out_dir,
                                                const std::string& prefix) {
  std::filesystem::create_directories(out_dir);
  const auto csv_path = out_dir / (prefix + ".csv");
  const auto json_path = out_dir / (prefix + ".json");
  for (const auto& [path, text] : {std::pair{csv_path, &bundle.csv}, std::pair{json_path, &bundle.json}}) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(fmt::format("cannot write {}", path.string()));
    f << *text;
  }
  return {csv_path, json_path};
}

std::vector<SelfTestResult> self_test() {
  std::vector<SelfTestResult> out;
  auto run = [&out](std::string name, auto&& body) {
    SelfTestResult r{std::move(name), false, {}};
    try {
      r.detail = body();
      r.passed = r.detail.empty();
      if (r.passed) r.detail = "ok";
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  };

  run("fft matches direct", [] {
    const auto seg = sieve::build_spf_segment(900, 3300);
    const auto p = sieve::E2Params::restricted(5, 25);
    const auto ser = correlate::build_pair_series(correlate::PairKind::E2xE2Restricted,
                                                  correlate::Weighting::Indicator, 1000, 100, p, seg);
    const auto a = correlate::correlate_direct(ser.f, ser.g, 100);
    const auto c = correlate::correlate_fft(ser.f, ser.g, 100);
    return a.values == c.values ? std::string{} : std::string("profiles differ");
  });
  run("discrete parseval", [] {
    const auto seg = sieve::build_spf_segment(1000, 1000);
    const auto w = sieve::weights_varpi2(seg, sieve::E2Params::restricted(5, 25));
    const auto r = circle::discrete_parseval(w, 1024);
    const double rel = std::abs(r.lhs - r.rhs) / r.rhs;
    return rel <= 1e-9 ? std::string{} : fmt::format("relative gap {:.3g}", rel);
  });
  run("character orthogonality", [] {
    for (i64 q = 1; q <= 30; ++q) {
      const auto t = dirichlet::characters_mod_q(q);
      if (static_cast<i64>(t.chars.size()) != arith::euler_phi(q)) return fmt::format("q={}: count", q);
      for (std::size_t i = 0; i < t.chars.size(); ++i) {
        for (std::size_t j = 0; j < t.chars.size(); ++j) {
          std::complex<double> acc = 0.0;
          for (i64 a = 0; a < q; ++a) acc += t.chars[i](a) * std::conj(t.chars[j](a));
          const double want = i == j ? static_cast<double>(t.chars.size()) : 0.0;
          if (std::abs(acc - want) > 1e-10) return fmt::format("q={}: rows {} {}", q, i, j);
        }
      }
      const auto tau = dirichlet::gauss_sum(t.chars.front());
      if (std::abs(tau - static_cast<double>(arith::mobius(q))) > 1e-10) {
        return fmt::format("q={}: principal Gauss sum", q);
      }
    }
    return std::string{};
  });
  run("factorisation identity", [] {
    const auto chars = dirichlet::characters_mod_q(5);
    for (const auto& chi : chars.chars) {
      const auto r = dirichlet::factorization_check(1000, sieve::E2Params::restricted(5, 25), 10.0,
                                                    {1.0, 3.0}, chi);
      if (r.residual >= 1e-9) return fmt::format("residual {:.3g}", r.residual);
    }
    return std::string{};
  });
  run("geometric sum bound", [] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> beta(-2.0, 2.0);
    std::uniform_int_distribution<i64> len(1, 100000);
    for (int i = 0; i < 200; ++i) {
      const double b = beta(rng);
      const i64 x = len(rng);
      const double d = circle::dist_to_int(b);
      const double bound = std::min(static_cast<double>(x), d > 0 ? 0.5 / d : INFINITY);
      if (std::abs(circle::geometric_phase_sum(b, x)) > bound * (1 + 1e-12)) {
        return fmt::format("beta={} x={}", b, x);
      }
    }
    return std::string{};
  });
  run("singular series average", [] {
    const double avg = singular::singular_series_average(10000) / 10000.0;
    return std::abs(avg - 1.0) <= 0.05 ? std::string{} : fmt::format("average {:.6f}", avg);
  });
  return out;
}

}  // namespace apc::runner
