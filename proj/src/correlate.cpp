#include "apc/correlate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fftw3.h>
#include <fmt/format.h>
#include <limits>
#include <memory>
#include <mutex>

#include "apc/errors.hpp"
#include "apc/summation.hpp"

namespace apc::correlate {

namespace {

constexpr i64 kMaxGroups = 64;
constexpr i64 kMinGroupLen = 1024;
constexpr double kRoundingGuard = 0.25;
// Constant in the a-priori FFT convolution error model c * u * log2(L) * |f|_2 |g|_2.
constexpr double kFftErrorConstant = 8.0;

void check_windows(const WeightedSeries& f, const WeightedSeries& g, i64 h_max) {
  if (h_max < 0) throw ParameterError(fmt::format("shift bound H = {} must be >= 0", h_max));
  if (f.len() < 1) throw ParameterError("f window is empty");
  if (!g.covers(f.start - h_max, f.end() + h_max)) {
    throw ParameterError(fmt::format(
        "g window ({}, {}] does not cover the widened window ({}, {}] required for H = {}",
        g.start, g.end(), f.start - h_max, f.end() + h_max, h_max));
  }
}

CorrelationProfile empty_profile(const WeightedSeries& f, const WeightedSeries& g, i64 h_max) {
  CorrelationProfile p;
  p.x = f.start;
  p.n = f.len();
  p.h_max = h_max;
  p.values.assign(static_cast<std::size_t>(2 * h_max + 1), 0.0);
  p.fkind = f.kind;
  p.gkind = g.kind;
  p.integral = sieve::is_indicator(f.kind) && sieve::is_indicator(g.kind);
  return p;
}

// Fixed partition of [0, n) into at most kMaxGroups contiguous ranges.
std::vector<i64> group_bounds(i64 n) {
  const i64 groups = std::clamp<i64>(n / kMinGroupLen, 1, kMaxGroups);
  std::vector<i64> bounds(static_cast<std::size_t>(groups) + 1);
  for (i64 k = 0; k <= groups; ++k) bounds[k] = n * k / groups;
  return bounds;
}

struct Support {
  std::vector<i64> pos;  // absolute n, ascending
  std::vector<double> val;
};

Support support_of(const WeightedSeries& s) {
  Support out;
  for (i64 i = 0; i < s.len(); ++i) {
    const double v = s.values[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    out.pos.push_back(s.start + 1 + i);
    out.val.push_back(v);
  }
  return out;
}

// ---- FFTW plumbing -------------------------------------------------------

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuf = std::unique_ptr<double[], FftwFree>;
using ComplexBuf = std::unique_ptr<fftw_complex[], FftwFree>;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlans {
 public:
  explicit FftPlans(i64 size) : size_(size) {
    RealBuf r(fftw_alloc_real(static_cast<std::size_t>(size)));
    ComplexBuf c(fftw_alloc_complex(static_cast<std::size_t>(size / 2 + 1)));
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(size), r.get(), c.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(size), c.get(), r.get(), FFTW_ESTIMATE);
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  // New-array execution is thread-safe once the plans exist.
  void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(forward_, in, out); }
  void backward(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(backward_, in, out); }
  i64 size() const noexcept { return size_; }

 private:
  i64 size_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

i64 fft_size_for(i64 h_max) {
  const auto need = static_cast<std::uint64_t>(4 * (2 * h_max + 1));
  return std::max<i64>(i64{1} << 15, static_cast<i64>(std::bit_ceil(need)));
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::Auto: return "auto";
    case Backend::Direct: return "direct";
    case Backend::Fft: return "fft";
  }
  return "auto";
}

double CorrelationProfile::at(i64 h) const {
  if (h == 0) throw DomainError("lag 0 is not part of a correlation profile; use zero_lag()");
  if (h < -h_max || h > h_max) {
    throw RangeError(fmt::format("shift {} outside profile range [-{}, {}]", h, h_max, h_max));
  }
  return values[static_cast<std::size_t>(h + h_max)];
}

CorrelationProfile correlate_direct(const WeightedSeries& f, const WeightedSeries& g,
                                    i64 h_max) {
  check_windows(f, g, h_max);
  CorrelationProfile profile = empty_profile(f, g, h_max);
  profile.backend = Backend::Direct;

  const Support fs = support_of(f);
  const Support gs = support_of(g);
  const auto bounds = group_bounds(f.len());
  const i64 groups = static_cast<i64>(bounds.size()) - 1;
  const std::size_t width = static_cast<std::size_t>(2 * h_max + 1);
  const bool integral = profile.integral;

  std::vector<std::vector<CompensatedSum>> real_parts(static_cast<std::size_t>(groups));
  std::vector<std::vector<std::int64_t>> int_parts(static_cast<std::size_t>(groups));

#pragma omp parallel for schedule(dynamic, 1)
  for (i64 k = 0; k < groups; ++k) {
    const i64 lo = f.start + 1 + bounds[k];
    const i64 hi = f.start + bounds[k + 1];  // inclusive
    auto first = std::lower_bound(fs.pos.begin(), fs.pos.end(), lo);
    auto last = std::upper_bound(fs.pos.begin(), fs.pos.end(), hi);
    std::vector<CompensatedSum> acc;
    std::vector<std::int64_t> counts;
    if (integral) {
      counts.assign(width, 0);
    } else {
      acc.assign(width, CompensatedSum{});
    }
    auto gcur = gs.pos.begin();
    for (auto it = first; it != last; ++it) {
      const i64 n = *it;
      const double fv = fs.val[static_cast<std::size_t>(it - fs.pos.begin())];
      gcur = std::lower_bound(gcur, gs.pos.end(), n - h_max);
      for (auto gj = gcur; gj != gs.pos.end() && *gj <= n + h_max; ++gj) {
        const auto lag = static_cast<std::size_t>(*gj - n + h_max);
        if (integral) {
          ++counts[lag];
        } else {
          acc[lag].add(fv * gs.val[static_cast<std::size_t>(gj - gs.pos.begin())]);
        }
      }
    }
    real_parts[static_cast<std::size_t>(k)] = std::move(acc);
    int_parts[static_cast<std::size_t>(k)] = std::move(counts);
  }

  for (std::size_t lag = 0; lag < width; ++lag) {
    if (integral) {
      std::int64_t total = 0;
      for (const auto& part : int_parts) total += part[lag];
      profile.values[lag] = static_cast<double>(total);
    } else {
      CompensatedSum total;
      for (const auto& part : real_parts) total.add(part[lag]);
      profile.values[lag] = total.value();
    }
  }
  return profile;
}

CorrelationProfile correlate_fft(const WeightedSeries& f, const WeightedSeries& g, i64 h_max) {
  check_windows(f, g, h_max);
  CorrelationProfile profile = empty_profile(f, g, h_max);
  profile.backend = Backend::Fft;

  const i64 size = fft_size_for(h_max);
  const i64 block = size - 2 * h_max;  // f entries per transform
  const i64 blocks = (f.len() + block - 1) / block;
  const std::size_t width = static_cast<std::size_t>(2 * h_max + 1);
  const std::size_t spectrum = static_cast<std::size_t>(size / 2 + 1);
  const double unit_roundoff = std::numeric_limits<double>::epsilon() / 2.0;
  const double log_size = std::log2(static_cast<double>(size));
  const FftPlans plans(size);

  // Blocks are summed inside fixed groups, then groups are reduced in order.
  const i64 groups = std::min<i64>(blocks, kMaxGroups);
  std::vector<std::vector<CompensatedSum>> parts(static_cast<std::size_t>(groups));
  std::vector<double> bounds(static_cast<std::size_t>(groups), 0.0);

#pragma omp parallel
  {
    RealBuf fbuf(fftw_alloc_real(static_cast<std::size_t>(size)));
    RealBuf gbuf(fftw_alloc_real(static_cast<std::size_t>(size)));
    ComplexBuf fspec(fftw_alloc_complex(spectrum));
    ComplexBuf gspec(fftw_alloc_complex(spectrum));

#pragma omp for schedule(dynamic, 1)
    for (i64 grp = 0; grp < groups; ++grp) {
      std::vector<CompensatedSum> acc(width);
      double bound = 0.0;
      const i64 b_first = blocks * grp / groups;
      const i64 b_last = blocks * (grp + 1) / groups;
      for (i64 b = b_first; b < b_last; ++b) {
        const i64 f_off = b * block;                      // index into f.values
        const i64 g_off = f_off + (f.start - g.start) - h_max;  // index into g.values
        double fnorm2 = 0.0;
        double gnorm2 = 0.0;
        for (i64 i = 0; i < size; ++i) {
          const i64 fi = f_off + i;
          const double fv = (i < block && fi < f.len()) ? f.values[static_cast<std::size_t>(fi)] : 0.0;
          const i64 gi = g_off + i;
          const bool g_live = i < block + 2 * h_max && gi >= 0 && gi < g.len();
          const double gv = g_live ? g.values[static_cast<std::size_t>(gi)] : 0.0;
          fbuf[i] = fv;
          gbuf[i] = gv;
          fnorm2 += fv * fv;
          gnorm2 += gv * gv;
        }
        if (fnorm2 == 0.0 || gnorm2 == 0.0) continue;
        plans.forward(fbuf.get(), fspec.get());
        plans.forward(gbuf.get(), gspec.get());
        for (std::size_t k = 0; k < spectrum; ++k) {
          const std::complex<double> a(fspec[k][0], -fspec[k][1]);
          const std::complex<double> c(gspec[k][0], gspec[k][1]);
          const std::complex<double> prod = a * c;
          gspec[k][0] = prod.real();
          gspec[k][1] = prod.imag();
        }
        plans.backward(gspec.get(), gbuf.get());
        const double scale = 1.0 / static_cast<double>(size);
        for (std::size_t lag = 0; lag < width; ++lag) acc[lag].add(gbuf[lag] * scale);
        bound += kFftErrorConstant * unit_roundoff * log_size * std::sqrt(fnorm2 * gnorm2);
      }
      parts[static_cast<std::size_t>(grp)] = std::move(acc);
      bounds[static_cast<std::size_t>(grp)] = bound;
    }
  }

  double error_bound = 0.0;
  for (double b : bounds) error_bound += b;
  for (std::size_t lag = 0; lag < width; ++lag) {
    CompensatedSum total;
    for (const auto& part : parts) total.add(part[lag]);
    profile.values[lag] = total.value();
  }

  if (profile.integral) {
    if (error_bound >= kRoundingGuard) {
      throw PrecisionError(fmt::format(
          "FFT error bound {:.3g} exceeds the rounding guard {}", error_bound, kRoundingGuard));
    }
    for (double& v : profile.values) {
      const double r = std::nearbyint(v);
      if (std::abs(v - r) >= kRoundingGuard) {
        throw PrecisionError(fmt::format("FFT entry {:.6f} is not within {} of an integer", v,
                                         kRoundingGuard));
      }
      v = r + 0.0;  // no -0 in the output
    }
  }
  return profile;
}

CorrelationProfile correlate(const WeightedSeries& f, const WeightedSeries& g, i64 h_max,
                             Backend backend) {
  if (backend == Backend::Auto) {
    check_windows(f, g, h_max);
    const double nnz_f = static_cast<double>(f.support_size());
    const double density_g = static_cast<double>(g.support_size()) / static_cast<double>(g.len());
    const double direct_cost = nnz_f * (2.0 * static_cast<double>(h_max) + 1.0) * density_g;
    const double size = static_cast<double>(fft_size_for(h_max));
    const double blocks = std::ceil(static_cast<double>(f.len()) / (size - 2.0 * h_max));
    const double fft_cost = 3.0 * blocks * size * std::log2(size) + blocks * size * 2.0;
    backend = direct_cost <= fft_cost ? Backend::Direct : Backend::Fft;
  }
  if (backend == Backend::Fft) {
    try {
      return correlate_fft(f, g, h_max);
    } catch (const PrecisionError&) {
      return correlate_direct(f, g, h_max);
    }
  }
  return correlate_direct(f, g, h_max);
}

std::string_view to_string(PairKind kind) noexcept {
  switch (kind) {
    case PairKind::E2xE2Restricted: return "e2xe2-restricted";
    case PairKind::E2xE2Typical: return "e2xe2-typical";
    case PairKind::PrimeXE2: return "prime-x-e2";
  }
  return "e2xe2-restricted";
}

std::string_view to_string(Weighting weighting) noexcept {
  switch (weighting) {
    case Weighting::Default: return "default";
    case Weighting::Weighted: return "weighted";
    case Weighting::Indicator: return "indicator";
  }
  return "default";
}

PairSeries build_pair_series(PairKind kind, Weighting weighting, i64 x, i64 h_max,
                             const sieve::E2Params& params, const sieve::SieveSegment& seg) {
  if (h_max < 1) throw DomainError(fmt::format("shift bound H = {} must satisfy H >= 1", h_max));
  if (x <= h_max) throw ParameterError(fmt::format("need H < X, got X = {}, H = {}", x, h_max));
  const bool restricted_params = params.variant() == sieve::E2Params::Variant::Restricted;
  if (kind == PairKind::E2xE2Restricted && !restricted_params) {
    throw ParameterError("e2xe2-restricted correlation requires restricted E2 parameters");
  }
  if (kind == PairKind::E2xE2Typical && restricted_params) {
    throw ParameterError("e2xe2-typical correlation requires typical E2 parameters");
  }
  if (seg.start() > x - h_max || seg.end() < 2 * x + h_max) {
    throw ParameterError(fmt::format("sieve segment ({}, {}] does not cover ({}, {}]", seg.start(),
                                     seg.end(), x - h_max, 2 * x + h_max));
  }
  params.validate_for_window(x - h_max);

  if (weighting == Weighting::Default) {
    weighting = kind == PairKind::E2xE2Typical ? Weighting::Indicator : Weighting::Weighted;
  }
  const bool weighted = weighting == Weighting::Weighted;
  auto e2 = weighted ? sieve::weights_varpi2(seg, params) : sieve::indicator_e2(seg, params);
  auto g = e2.slice(x - h_max, x + 2 * h_max);
  WeightedSeries f;
  if (kind == PairKind::PrimeXE2) {
    auto primes = weighted ? sieve::weights_von_mangoldt(seg) : sieve::prime_indicator(seg);
    f = primes.slice(x, x);
  } else {
    f = e2.slice(x, x);
  }
  return PairSeries{std::move(f), std::move(g)};
}

PairCorrelation correlate_weighted_pair(PairKind kind, i64 x, i64 h_max,
                                        const sieve::E2Params& params,
                                        const sieve::SieveSegment& seg, Weighting weighting,
                                        Backend backend) {
  const PairSeries series = build_pair_series(kind, weighting, x, h_max, params, seg);
  PairCorrelation out;
  out.profile = correlate(series.f, series.g, h_max, backend);
  const auto g_core = series.g.slice(x, x);
  out.count_f = series.f.support_size();
  out.count_g = g_core.support_size();
  out.total_f = series.f.total();
  out.total_g = g_core.total();
  return out;
}

PairCorrelation correlate_weighted_pair(PairKind kind, i64 x, i64 h_max,
                                        const sieve::E2Params& params, Weighting weighting,
                                        Backend backend) {
  if (h_max < 1) throw DomainError(fmt::format("shift bound H = {} must satisfy H >= 1", h_max));
  if (x <= h_max) throw ParameterError(fmt::format("need H < X, got X = {}, H = {}", x, h_max));
  const auto seg = sieve::build_spf_segment(x - h_max, x + 2 * h_max);
  return correlate_weighted_pair(kind, x, h_max, params, seg, weighting, backend);
}

}  // namespace apc::correlate
