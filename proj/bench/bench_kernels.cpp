#include <benchmark/benchmark.h>

#include "apc/circle.hpp"
#include "apc/correlate.hpp"
#include "apc/reference.hpp"
#include "apc/sieve.hpp"

namespace {

using apc::sieve::E2Params;

const apc::correlate::PairSeries& pair_series(std::int64_t x, std::int64_t h) {
  static std::int64_t cached_x = -1, cached_h = -1;
  static apc::correlate::PairSeries series;
  if (x != cached_x || h != cached_h) {
    const auto seg = apc::sieve::build_spf_segment(x - h, x + 2 * h);
    series = apc::correlate::build_pair_series(apc::correlate::PairKind::E2xE2Restricted,
                                               apc::correlate::Weighting::Indicator, x, h,
                                               E2Params::restricted(10, 100), seg);
    cached_x = x;
    cached_h = h;
  }
  return series;
}

void BM_SieveParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(apc::sieve::build_spf_segment(st.range(0), st.range(0)));
}
void BM_SieveSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(apc::reference::spf_segment_serial(st.range(0), st.range(0)));
}

void BM_CorrelateDirect(benchmark::State& st) {
  const auto& s = pair_series(100000, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(apc::correlate::correlate_direct(s.f, s.g, st.range(0)));
}
void BM_CorrelateFft(benchmark::State& st) {
  const auto& s = pair_series(100000, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(apc::correlate::correlate_fft(s.f, s.g, st.range(0)));
}
void BM_CorrelateNaive(benchmark::State& st) {
  const auto& s = pair_series(100000, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(apc::reference::correlate_naive(s.f, s.g, st.range(0)));
}

void BM_ExpSum(benchmark::State& st) {
  const auto& s = pair_series(100000, 100);
  for (auto _ : st) benchmark::DoNotOptimize(apc::circle::exp_sum(s.f, 0.318309886));
}
void BM_ExpSumNaive(benchmark::State& st) {
  const auto& s = pair_series(100000, 100);
  for (auto _ : st) benchmark::DoNotOptimize(apc::reference::exp_sum_naive(s.f, 0.318309886));
}

}  // namespace

BENCHMARK(BM_SieveParallel)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_SieveSerial)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_CorrelateDirect)->Arg(100)->Arg(1000);
BENCHMARK(BM_CorrelateFft)->Arg(100)->Arg(1000);
BENCHMARK(BM_CorrelateNaive)->Arg(100)->Arg(1000);
BENCHMARK(BM_ExpSum);
BENCHMARK(BM_ExpSumNaive);

BENCHMARK_MAIN();
