#include <doctest.h>

#include <string>

#include "apc/errors.hpp"
#include "apc/runner.hpp"

using namespace apc;
using runner::parse_config;

namespace {

const std::string kBase =
    "x = 100000\n"
    "h = 200\n"
    "e2.variant = restricted\n"
    "e2.p = 10\n"
    "e2.p_upper = 50\n";

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("defaults and basic parsing") {
  const auto cfg = parse_config("# comment line\n" + kBase + "\n   \n");
  CHECK(cfg.x == 100000);
  CHECK(cfg.h == 200);
  CHECK(cfg.params == sieve::E2Params::restricted(10, 50));
  CHECK(cfg.pair == correlate::PairKind::E2xE2Restricted);
  CHECK(cfg.weighting == correlate::Weighting::Default);
  CHECK(cfg.backend == correlate::Backend::Auto);
  CHECK(cfg.seed == 1);
  CHECK(cfg.prefix == "apc");
  CHECK_FALSE(cfg.fold_signs);
  CHECK_FALSE(cfg.singular_q0);
  CHECK_FALSE(cfg.arcs);
  CHECK(cfg.cache_dir.empty());
  CHECK(runner::model_for(cfg) == predict::Model::WeightedRestricted);
}

TEST_CASE("full key set") {
  const auto cfg = parse_config(
      "x = 1e7   # scientific notation is fine when integral\n"
      "h = 10000\n"
      "e2.variant = typical\n"
      "e2.p1 = 50\n"
      "e2.p2 = 3000\n"
      "correlation = prime_x_e2\n"
      "weighting = weighted\n"
      "backend = fft\n"
      "singular.q0 = 1000\n"
      "arcs.q0 = 5\n"
      "arcs.q = 200\n"
      "arcs.samples = 5000\n"
      "seed = 42\n"
      "threads = 3\n"
      "dirichlet.q = 7\n"
      "dirichlet.u = 12.5\n"
      "dirichlet.t = -3\n"
      "output.dir = out/here\n"
      "output.prefix = run1\n"
      "output.fold_signs = true\n"
      "cache.dir = /tmp/apc-cache\n");
  CHECK(cfg.x == 10'000'000);
  CHECK(cfg.params == sieve::E2Params::typical(50, 3000));
  CHECK(cfg.pair == correlate::PairKind::PrimeXE2);
  CHECK(cfg.weighting == correlate::Weighting::Weighted);
  CHECK(cfg.backend == correlate::Backend::Fft);
  CHECK(cfg.singular_q0 == 1000);
  REQUIRE(cfg.arcs);
  CHECK(cfg.arcs->q0 == 5);
  CHECK(cfg.arcs->q_max == 200);
  CHECK(cfg.arc_samples == 5000);
  CHECK(cfg.seed == 42);
  CHECK(cfg.threads == 3);
  CHECK(cfg.dirichlet_q == 7);
  CHECK(cfg.dirichlet_u == 12.5);
  CHECK(cfg.dirichlet_t == -3.0);
  CHECK(cfg.out_dir == "out/here");
  CHECK(cfg.prefix == "run1");
  CHECK(cfg.fold_signs);
  CHECK(cfg.cache_dir == "/tmp/apc-cache");
  CHECK(runner::model_for(cfg) == predict::Model::PrimeByE2Weighted);
}

TEST_CASE("model selection") {
  auto cfg = parse_config(kBase + "weighting = indicator\n");
  CHECK(runner::model_for(cfg) == predict::Model::UnweightedRestricted);
  cfg = parse_config("x = 100000\nh = 100\ne2.variant = typical\ne2.p1 = 5\ne2.p2 = 200\n");
  CHECK(cfg.pair == correlate::PairKind::E2xE2Typical);
  CHECK(runner::model_for(cfg) == predict::Model::Typical);
  cfg = parse_config(kBase + "correlation = prime_x_e2\nweighting = indicator\n");
  CHECK(runner::model_for(cfg) == predict::Model::PrimeByE2);
}

TEST_CASE("errors name the offending field") {
  CHECK(field_of(kBase + "colour = blue\n") == "colour");
  CHECK(field_of(kBase + "h = 3\n") == "h");
  CHECK(field_of("h = 1\ne2.variant = restricted\ne2.p = 2\ne2.p_upper = 3\n") == "x");
  CHECK(field_of(kBase + "no equals sign here\n") == "line 6");
  CHECK(field_of("x = 1.5\nh = 1\ne2.variant = restricted\ne2.p = 2\ne2.p_upper = 3\n") == "x");
  CHECK(field_of("x = 100\nh = 1\ne2.variant = fancy\n") == "e2.variant");
  CHECK(field_of("x = 100\nh = 1\ne2.variant = restricted\ne2.p = 5\ne2.p_upper = 5\n") == "e2.p");
  CHECK(field_of(kBase + "e2.p1 = 3\n") == "e2.p1");
  CHECK(field_of(kBase + "weighting = heavy\n") == "weighting");
  CHECK(field_of(kBase + "backend = gpu\n") == "backend");
  CHECK(field_of(kBase + "correlation = triple\n") == "correlation");
  CHECK(field_of(kBase + "arcs.q0 = 3\n") == "arcs.q");
  CHECK(field_of(kBase + "arcs.q0 = 10\narcs.q = 150\n") == "arcs.q");
  CHECK(field_of(kBase + "singular.q0 = 0\n") == "singular.q0");
  CHECK(field_of(kBase + "arcs.q0 = 2\narcs.q = 100\narcs.samples = 0\n") == "arcs.samples");
  CHECK(field_of(kBase + "threads = -1\n") == "threads");
  CHECK(field_of(kBase + "seed = -4\n") == "seed");
  CHECK(field_of(kBase + "dirichlet.q = 10001\n") == "dirichlet.q");
  CHECK(field_of(kBase + "dirichlet.u = 0.5\n") == "dirichlet.u");
  CHECK(field_of(kBase + "dirichlet.t = nope\n") == "dirichlet.t");
  CHECK(field_of(kBase + "output.fold_signs = maybe\n") == "output.fold_signs");
  CHECK(field_of(kBase + "output.prefix = a/b\n") == "output.prefix");
  CHECK(field_of("x = 100\nh = 1\ne2.variant = restricted\ne2.p = 2\n") == "e2.p_upper");
  CHECK(field_of("x = 100000\nx = 100000\n") == "x");
  CHECK(field_of("x = 100000\nh = 100000\ne2.variant = restricted\ne2.p = 2\ne2.p_upper = 3\n") == "h");
}

TEST_CASE("sieve bound: upper^2 must not exceed X - H") {
  // 1000 - 50 = 950 < 31^2 = 961.
  const std::string text = "x = 1000\nh = 50\ne2.variant = restricted\ne2.p = 5\ne2.p_upper = 31\n";
  try {
    parse_config(text);
    FAIL("accepted an oversized bound");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "e2.p_upper");
    CHECK(std::string(e.what()).find("Pupper^2 = 961 exceeds X - H = 950") != std::string::npos);
  }
  CHECK_NOTHROW(parse_config("x = 1000\nh = 39\ne2.variant = restricted\ne2.p = 5\ne2.p_upper = 31\n"));
  CHECK(field_of("x = 1000\nh = 50\ne2.variant = typical\ne2.p1 = 5\ne2.p2 = 31\n") == "e2.p2");
}

TEST_CASE("validate re-checks hand-built configs") {
  auto cfg = parse_config(kBase);
  cfg.h = cfg.x;
  CHECK_THROWS_AS(runner::validate(cfg), ConfigError);
  cfg = parse_config(kBase);
  cfg.pair = correlate::PairKind::E2xE2Typical;
  CHECK_THROWS_AS(runner::validate(cfg), ConfigError);
}

TEST_CASE("load_config reads files") {
  const auto cfg = runner::load_config(std::string(APC_TEST_DATA) + "/minimal.cfg");
  CHECK(cfg.x == 1000);
  CHECK(cfg.h == 50);
  CHECK_THROWS_AS(runner::load_config("/nonexistent/apc.cfg"), ConfigError);
  CHECK_THROWS_AS(runner::load_config(std::string(APC_TEST_DATA) + "/oversized_bound.cfg"), ConfigError);
}
