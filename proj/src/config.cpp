#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "apc/arith.hpp"
#include "apc/errors.hpp"
#include "apc/runner.hpp"

namespace apc::runner {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "x",           "h",          "e2.variant",     "e2.p",          "e2.p_upper",
    "e2.p1",       "e2.p2",      "correlation",    "weighting",     "backend",
    "singular.q0", "arcs.q0",    "arcs.q",         "arcs.samples",  "seed",
    "threads",     "dirichlet.q", "dirichlet.u",   "dirichlet.t",   "output.dir",
    "output.prefix", "output.fold_signs", "cache.dir"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

i64 to_int(const std::string& key, const std::string& v) {
  i64 out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec == std::errc{} && p == end) return out;
  // Accept integral scientific notation such as 1e7.
  double d = 0.0;
  auto [pd, ecd] = std::from_chars(v.data(), end, d);
  if (ecd == std::errc{} && pd == end && std::isfinite(d) && d == std::floor(d) &&
      std::abs(d) < 9.0e18) {
    return static_cast<i64>(d);
  }
  throw ConfigError(key, fmt::format("expected an integer, got '{}'", v));
}

double to_double(const std::string& key, const std::string& v) {
  double d = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, d);
  if (ec != std::errc{} || p != end || !std::isfinite(d)) {
    throw ConfigError(key, fmt::format("expected a finite number, got '{}'", v));
  }
  return d;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, fmt::format("expected true or false, got '{}'", v));
}

class Fields {
 public:
  explicit Fields(std::map<std::string, std::string, std::less<>> kv) : kv_(std::move(kv)) {}

  bool has(std::string_view key) const { return kv_.count(key) > 0; }
  const std::string& get(std::string_view key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError(std::string(key), "missing required key");
    return it->second;
  }
  i64 integer(std::string_view key) const { return to_int(std::string(key), get(key)); }

 private:
  std::map<std::string, std::string, std::less<>> kv_;
};

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}", line_no),
                        fmt::format("expected key = value, got '{}'", line));
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(fmt::format("line {}", line_no), "empty key");
    if (!kKnownKeys.count(key)) throw ConfigError(key, "unknown key");
    if (kv.count(key)) throw ConfigError(key, "duplicate key");
    kv.emplace(std::move(key), std::move(value));
  }
  const Fields f(std::move(kv));

  ExperimentConfig cfg;
  cfg.x = f.integer("x");
  cfg.h = f.integer("h");

  const std::string& variant = f.get("e2.variant");
  try {
    if (variant == "restricted") {
      for (const char* k : {"e2.p1", "e2.p2"}) {
        if (f.has(k)) throw ConfigError(k, "not used by the restricted variant");
      }
      cfg.params = sieve::E2Params::restricted(f.integer("e2.p"), f.integer("e2.p_upper"));
    } else if (variant == "typical") {
      for (const char* k : {"e2.p", "e2.p_upper"}) {
        if (f.has(k)) throw ConfigError(k, "not used by the typical variant");
      }
      cfg.params = sieve::E2Params::typical(f.integer("e2.p1"), f.integer("e2.p2"));
    } else {
      throw ConfigError("e2.variant", fmt::format("expected restricted or typical, got '{}'", variant));
    }
  } catch (const ParameterError& e) {
    throw ConfigError(variant == "restricted" ? "e2.p" : "e2.p1", e.what());
  }
  const bool restricted = cfg.params.variant() == sieve::E2Params::Variant::Restricted;

  const std::string corr = f.has("correlation") ? f.get("correlation") : "e2xe2";
  if (corr == "e2xe2") {
    cfg.pair = restricted ? correlate::PairKind::E2xE2Restricted : correlate::PairKind::E2xE2Typical;
  } else if (corr == "prime_x_e2") {
    cfg.pair = correlate::PairKind::PrimeXE2;
  } else {
    throw ConfigError("correlation", fmt::format("expected e2xe2 or prime_x_e2, got '{}'", corr));
  }

  if (f.has("weighting")) {
    const std::string& w = f.get("weighting");
    if (w == "default") cfg.weighting = correlate::Weighting::Default;
    else if (w == "weighted") cfg.weighting = correlate::Weighting::Weighted;
    else if (w == "indicator") cfg.weighting = correlate::Weighting::Indicator;
    else throw ConfigError("weighting", fmt::format("expected default, weighted or indicator, got '{}'", w));
  }
  if (f.has("backend")) {
    const std::string& b = f.get("backend");
    if (b == "auto") cfg.backend = correlate::Backend::Auto;
    else if (b == "direct") cfg.backend = correlate::Backend::Direct;
    else if (b == "fft") cfg.backend = correlate::Backend::Fft;
    else throw ConfigError("backend", fmt::format("expected auto, direct or fft, got '{}'", b));
  }

  if (f.has("singular.q0")) cfg.singular_q0 = f.integer("singular.q0");
  if (f.has("arcs.q0") != f.has("arcs.q")) {
    throw ConfigError(f.has("arcs.q0") ? "arcs.q" : "arcs.q0", "arcs.q0 and arcs.q go together");
  }
  if (f.has("arcs.q0")) {
    try {
      cfg.arcs = circle::ArcParams::make(f.integer("arcs.q0"), f.integer("arcs.q"));
    } catch (const ParameterError& e) {
      throw ConfigError("arcs.q", e.what());
    }
  }
  if (f.has("arcs.samples")) cfg.arc_samples = f.integer("arcs.samples");
  if (f.has("seed")) {
    const i64 s = f.integer("seed");
    if (s < 0) throw ConfigError("seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (f.has("threads")) cfg.threads = static_cast<int>(f.integer("threads"));
  if (f.has("dirichlet.q")) cfg.dirichlet_q = f.integer("dirichlet.q");
  if (f.has("dirichlet.u")) cfg.dirichlet_u = to_double("dirichlet.u", f.get("dirichlet.u"));
  if (f.has("dirichlet.t")) cfg.dirichlet_t = to_double("dirichlet.t", f.get("dirichlet.t"));
  if (f.has("output.dir")) cfg.out_dir = f.get("output.dir");
  if (f.has("output.prefix")) cfg.prefix = f.get("output.prefix");
  if (f.has("output.fold_signs")) cfg.fold_signs = to_bool("output.fold_signs", f.get("output.fold_signs"));
  if (f.has("cache.dir")) cfg.cache_dir = f.get("cache.dir");

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.x < 2) throw ConfigError("x", fmt::format("X = {} must be at least 2", cfg.x));
  if (cfg.h < 1) throw ConfigError("h", fmt::format("H = {} must be at least 1", cfg.h));
  if (cfg.h >= cfg.x) throw ConfigError("h", fmt::format("need H < X, got H = {}, X = {}", cfg.h, cfg.x));
  if (cfg.x > (sieve::kMaxWindowEnd - 2 * cfg.h) / 2) {
    throw ConfigError("x", fmt::format("window end 2X + H exceeds {}", sieve::kMaxWindowEnd));
  }
  const bool restricted = cfg.params.variant() == sieve::E2Params::Variant::Restricted;
  const i64 up = cfg.params.upper();
  const i64 start = cfg.x - cfg.h;
  if (up > static_cast<i64>(arith::isqrt(static_cast<arith::u64>(start)))) {
    const char* name = restricted ? "Pupper" : "P2";
    throw ConfigError(restricted ? "e2.p_upper" : "e2.p2",
                      fmt::format("{}^2 = {} exceeds X - H = {}; the sieve needs {}^2 <= X - H",
                                  name, up * up, start, name));
  }
  if (cfg.pair == correlate::PairKind::E2xE2Restricted && !restricted) {
    throw ConfigError("correlation", "restricted pair kind with typical parameters");
  }
  if (cfg.pair == correlate::PairKind::E2xE2Typical && restricted) {
    throw ConfigError("correlation", "typical pair kind with restricted parameters");
  }
  if (cfg.singular_q0 && *cfg.singular_q0 < 1) {
    throw ConfigError("singular.q0", fmt::format("Q0 = {} must be positive", *cfg.singular_q0));
  }
  if (cfg.arcs) {
    const auto& a = *cfg.arcs;
    if (a.q0 < 1 || a.q_max <= a.q0) throw ConfigError("arcs.q", "need 1 <= Q0 < Q");
    if (a.q_max < 2 * a.q0 * a.q0) {
      throw ConfigError("arcs.q", fmt::format("need Q >= 2 Q0^2 = {} for disjoint major arcs",
                                              2 * a.q0 * a.q0));
    }
  }
  if (cfg.arc_samples < 1) throw ConfigError("arcs.samples", "must be positive");
  if (cfg.threads < 0) throw ConfigError("threads", "must be nonnegative");
  if (cfg.dirichlet_q < 1 || cfg.dirichlet_q > 10'000) {
    throw ConfigError("dirichlet.q", fmt::format("q = {} outside [1, 10000]", cfg.dirichlet_q));
  }
  if (!(cfg.dirichlet_u >= 1.0)) throw ConfigError("dirichlet.u", "U must be >= 1");
  if (cfg.prefix.empty() || cfg.prefix.find('/') != std::string::npos) {
    throw ConfigError("output.prefix", "must be a plain, nonempty file stem");
  }
}

predict::Model model_for(const ExperimentConfig& cfg) {
  using correlate::PairKind;
  using correlate::Weighting;
  Weighting w = cfg.weighting;
  if (w == Weighting::Default) {
    w = cfg.pair == PairKind::E2xE2Typical ? Weighting::Indicator : Weighting::Weighted;
  }
  const bool weighted = w == Weighting::Weighted;
  switch (cfg.pair) {
    case PairKind::E2xE2Restricted:
      return weighted ? predict::Model::WeightedRestricted : predict::Model::UnweightedRestricted;
    case PairKind::E2xE2Typical:
      return weighted ? predict::Model::WeightedRestricted : predict::Model::Typical;
    case PairKind::PrimeXE2:
      return weighted ? predict::Model::PrimeByE2Weighted : predict::Model::PrimeByE2;
  }
  return predict::Model::WeightedRestricted;
}

}  // namespace apc::runner
