// apc: command-line front end for the almost-prime correlation lab.
#include <CLI11.hpp>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <omp.h>

#include "apc/circle.hpp"
#include "apc/dirichlet.hpp"
#include "apc/errors.hpp"
#include "apc/runner.hpp"
#include "apc/singular.hpp"

namespace {

using apc::runner::ExperimentConfig;
using json = nlohmann::ordered_json;

struct CommonFlags {
  std::string config;
  std::string out;
  std::string cache;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool need_config) {
  auto* opt = cmd->add_option("--config", flags.config, "experiment config (key = value)");
  if (need_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "output directory (overrides output.dir)");
  cmd->add_option("--threads", flags.threads, "worker threads, 0 for the default")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--cache", flags.cache, "segment cache directory (APC_CACHE_DIR wins)");
}

ExperimentConfig resolve(const CommonFlags& flags) {
  ExperimentConfig cfg = apc::runner::load_config(flags.config);
  if (!flags.out.empty()) cfg.out_dir = flags.out;
  if (flags.threads > 0) cfg.threads = flags.threads;
  if (!flags.cache.empty()) cfg.cache_dir = flags.cache;
  if (const char* env = std::getenv("APC_CACHE_DIR"); env && *env) cfg.cache_dir = env;
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw apc::Error(fmt::format("cannot write {}", path.string()));
  f << text;
  std::cout << path.string() << "\n";
}

std::string num(double v) { return fmt::format("{:.12g}", v); }

int cmd_sieve(const CommonFlags& flags) {
  const auto cfg = resolve(flags);
  const auto seg = apc::runner::cached_segment(cfg.cache_dir, cfg.x - cfg.h, cfg.x + 2 * cfg.h);
  const auto core = apc::sieve::build_spf_segment(cfg.x, cfg.x);
  const auto e2 = apc::sieve::indicator_e2(core, cfg.params);
  const auto primes = apc::sieve::prime_indicator(core);
  json j;
  j["x"] = cfg.x;
  j["segment_start"] = seg.start();
  j["segment_len"] = seg.len();
  j["primes"] = primes.support_size();
  j["e2_members"] = e2.support_size();
  j["mertens"] = apc::sieve::mertens_sum(cfg.params);
  write_text(cfg.out_dir / (cfg.prefix + "_sieve.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_correlate(const CommonFlags& flags) {
  const auto cfg = resolve(flags);
  const auto seg = apc::runner::cached_segment(cfg.cache_dir, cfg.x - cfg.h, cfg.x + 2 * cfg.h);
  const auto pc = apc::correlate::correlate_weighted_pair(cfg.pair, cfg.x, cfg.h, cfg.params, seg,
                                                          cfg.weighting, cfg.backend);
  std::string csv = "h,actual\n";
  for (apc::runner::i64 h = -cfg.h; h <= cfg.h; ++h) {
    if (h != 0) csv += fmt::format("{},{}\n", h, num(pc.profile.at(h)));
  }
  write_text(cfg.out_dir / (cfg.prefix + "_correlation.csv"), csv);
  return 0;
}

int cmd_predict(const CommonFlags& flags) {
  const auto cfg = resolve(flags);
  const auto model = apc::runner::model_for(cfg);
  apc::runner::i64 cf = 0, cg = 0;
  if (model != apc::predict::Model::WeightedRestricted &&
      model != apc::predict::Model::PrimeByE2Weighted) {
    const auto seg = apc::runner::cached_segment(cfg.cache_dir, cfg.x - cfg.h, cfg.x + 2 * cfg.h);
    const auto s = apc::correlate::build_pair_series(cfg.pair, cfg.weighting, cfg.x, cfg.h,
                                                     cfg.params, seg);
    cf = static_cast<apc::runner::i64>(s.f.support_size());
    cg = static_cast<apc::runner::i64>(s.g.slice(cfg.x, cfg.x).support_size());
  }
  const auto pred = apc::predict::predict_profile(model, cfg.x, cfg.h, cfg.params, cf, cg);
  const auto series = apc::singular::singular_series_range(cfg.h);
  std::string csv = "h,parity,predicted,singular_series\n";
  for (apc::runner::i64 h = -cfg.h; h <= cfg.h; ++h) {
    if (h == 0) continue;
    csv += fmt::format("{},{},{},{}\n", h, h % 2 == 0 ? "even" : "odd", num(pred.at(h)),
                       num(series[static_cast<std::size_t>(std::abs(h) - 1)]));
  }
  write_text(cfg.out_dir / (cfg.prefix + "_prediction.csv"), csv);
  return 0;
}

int cmd_compare(const CommonFlags& flags) {
  const auto cfg = resolve(flags);
  const auto bundle = apc::runner::run_experiment(cfg);
  for (const auto& p : apc::runner::write_report(bundle, cfg.out_dir, cfg.prefix)) {
    std::cout << p.string() << "\n";
  }
  return 0;
}

int cmd_arcs(const CommonFlags& flags) {
  const auto cfg = resolve(flags);
  if (!cfg.arcs) throw apc::ConfigError("arcs.q0", "the arcs command needs arcs.q0 and arcs.q");
  json j;
  j["q0"] = cfg.arcs->q0;
  j["q"] = cfg.arcs->q_max;
  j["samples"] = cfg.arc_samples;
  j["seed"] = cfg.seed;
  j["measure"] = apc::circle::major_arc_measure(*cfg.arcs);
  j["frequency"] = apc::circle::major_arc_frequency(*cfg.arcs, cfg.arc_samples, cfg.seed);
  write_text(cfg.out_dir / (cfg.prefix + "_arcs.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_dirichlet(const CommonFlags& flags) {
  const auto cfg = resolve(flags);
  const auto table = apc::dirichlet::characters_mod_q(cfg.dirichlet_q);
  json j;
  j["q"] = table.q;
  j["x"] = cfg.x;
  j["t"] = cfg.dirichlet_t;
  j["u"] = cfg.dirichlet_u;
  json chars = json::array();
  const bool restricted = cfg.params.variant() == apc::sieve::E2Params::Variant::Restricted;
  for (std::size_t i = 0; i < table.chars.size(); ++i) {
    const auto& chi = table.chars[i];
    const auto tau = apc::dirichlet::gauss_sum(chi);
    const auto f = apc::dirichlet::eval_F(cfg.dirichlet_t, chi, cfg.x, cfg.params);
    json c;
    c["index"] = i;
    c["principal"] = chi.principal();
    c["conductor"] = chi.conductor();
    c["gauss_abs"] = std::abs(tau);
    c["F_re"] = f.real();
    c["F_im"] = f.imag();
    if (restricted) {
      const auto rep = apc::dirichlet::factorization_check(cfg.x, cfg.params, cfg.dirichlet_u,
                                                           {1.0, cfg.dirichlet_t}, chi);
      c["factorisation_residual"] = rep.residual;
      c["boundary_terms"] = rep.boundary_terms;
    }
    chars.push_back(std::move(c));
  }
  j["characters"] = std::move(chars);
  write_text(cfg.out_dir / (cfg.prefix + "_dirichlet.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_selftest(const CommonFlags& flags) {
  if (flags.threads > 0) omp_set_num_threads(flags.threads);
  int failures = 0;
  for (const auto& r : apc::runner::self_test()) {
    fmt::print("{} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
    if (!r.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"apc: almost-prime correlation lab"};
  app.require_subcommand(1);

  CommonFlags flags;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const CommonFlags&);
    bool need_config;
  };
  const Entry entries[] = {
      {"sieve", "sieve the window and report counts", cmd_sieve, true},
      {"correlate", "correlation profile for |h| <= H", cmd_correlate, true},
      {"predict", "main-term predictions", cmd_predict, true},
      {"compare", "correlate, predict and write the CSV / JSON report", cmd_compare, true},
      {"arcs", "major-arc measure against Monte Carlo frequency", cmd_arcs, true},
      {"dirichlet", "characters, Gauss sums and the factorisation check", cmd_dirichlet, true},
      {"selftest", "small exact-identity checks", cmd_selftest, false},
  };
  int (*chosen)(const CommonFlags&) = nullptr;
  for (const auto& e : entries) {
    auto* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, flags, e.need_config);
    cmd->callback([&chosen, run = e.run] { chosen = run; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return chosen(flags);
  } catch (const apc::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
