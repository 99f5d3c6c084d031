#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apc/circle.hpp"
#include "apc/correlate.hpp"
#include "apc/predict.hpp"
#include "apc/sieve.hpp"

// Experiment configuration (flat key = value files), orchestration and
// CSV / JSON reporting.
namespace apc::runner {

using i64 = std::int64_t;

struct ExperimentConfig {
  i64 x = 0;
  i64 h = 0;
  sieve::E2Params params = sieve::E2Params::restricted(2, 3);
  correlate::PairKind pair = correlate::PairKind::E2xE2Restricted;
  correlate::Weighting weighting = correlate::Weighting::Default;
  correlate::Backend backend = correlate::Backend::Auto;
  std::optional<i64> singular_q0;  // use the truncated series in the predictions
  std::optional<circle::ArcParams> arcs;
  i64 arc_samples = 1'000'000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 keeps the OpenMP default
  i64 dirichlet_q = 1;
  double dirichlet_u = 10.0;
  double dirichlet_t = 0.0;
  std::filesystem::path out_dir = ".";
  std::string prefix = "apc";
  bool fold_signs = false;
  std::filesystem::path cache_dir;  // empty disables segment caching
};

/// Parses `key = value` lines (`#` starts a comment) and validates the result.
/// Errors are ConfigError naming the offending key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-checks every cross-field precondition (H < X, upper^2 <= X - H, ...).
void validate(const ExperimentConfig& cfg);

/// Prediction model matching the pair kind and the effective weighting.
predict::Model model_for(const ExperimentConfig& cfg);

struct Summary {
  i64 x = 0;
  i64 h_max = 0;
  std::size_t count_f = 0;
  std::size_t count_g = 0;
  double mertens = 0.0;
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  double exceptional_10 = 0.0;
  double exceptional_25 = 0.0;
  double exceptional_50 = 0.0;
  double l2 = 0.0;
};

struct ReportBundle {
  correlate::PairCorrelation actual;
  predict::PredictionProfile predicted;
  std::vector<double> series;  // singular series used at h = 1..H
  predict::ErrorReport errors;
  Summary summary;
  std::string csv;
  std::string json;
};

/// Segment over (start, start + len], read from or written to the cache
/// directory when one is configured.
sieve::SieveSegment cached_segment(const std::filesystem::path& cache_dir, i64 start, i64 len);

ReportBundle run_experiment(const ExperimentConfig& cfg);

std::string format_csv(const ReportBundle& bundle, bool fold_signs);
std::string format_json(const Summary& summary);

/// Writes <prefix>.csv and <prefix>.json into out_dir; returns the two paths.
std::vector<std::filesystem::path> write_report(const ReportBundle& bundle,
                                                const std::filesystem::path& out_dir,
                                                const std::string& prefix);

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick exact-identity checks over small instances.
std::vector<SelfTestResult> self_test();

}  // namespace apc::runner
