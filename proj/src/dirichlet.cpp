#include "apc/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <limits>
#include <numeric>

#include "apc/arith.hpp"
#include "apc/errors.hpp"
#include "apc/summation.hpp"

namespace apc::dirichlet {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;
constexpr double kCoeffTol = 1e-12;

cplx unit_root(long double turns) {
  const long double a = kTwoPi * (turns - std::floor(turns));
  return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

// n^{-s} with the phase taken in extended precision.
cplx power_neg(i64 n, cplx s) {
  const long double ln = std::log(static_cast<long double>(n));
  const long double mag = std::exp(-static_cast<long double>(s.real()) * ln);
  const long double ph = -static_cast<long double>(s.imag()) * ln;
  return {static_cast<double>(mag * std::cos(ph)), static_cast<double>(mag * std::sin(ph))};
}

struct Component {
  i64 modulus;
  std::vector<i64> orders;
  std::vector<std::vector<std::int32_t>> log;  // log[r] = exponents of r, empty off the units
};

Component component_for(i64 p, int k) {
  i64 pk = 1;
  for (int i = 0; i < k; ++i) pk *= p;
  Component c{pk, {}, std::vector<std::vector<std::int32_t>>(static_cast<std::size_t>(pk))};
  if (p != 2) {
    const i64 g = arith::primitive_root_prime_power(p, k);
    const i64 phi = pk / p * (p - 1);
    c.orders = {phi};
    i64 x = 1;
    for (i64 e = 0; e < phi; ++e) {
      c.log[static_cast<std::size_t>(x)] = {static_cast<std::int32_t>(e)};
      x = x * g % pk;
    }
  } else if (k == 1) {
    c.log[1] = {};
  } else if (k == 2) {
    c.orders = {2};
    c.log[1] = {0};
    c.log[3] = {1};
  } else {
    const i64 half = pk / 4;
    c.orders = {2, half};
    i64 x = 1;
    for (i64 e = 0; e < half; ++e) {
      c.log[static_cast<std::size_t>(x)] = {0, static_cast<std::int32_t>(e)};
      c.log[static_cast<std::size_t>(pk - x)] = {1, static_cast<std::int32_t>(e)};
      x = x * 5 % pk;
    }
  }
  return c;
}

std::shared_ptr<const UnitGroup> build_unit_group(i64 q) {
  auto g = std::make_shared<UnitGroup>();
  g->q = q;
  std::vector<Component> comps;
  for (auto [p, k] : arith::factorize(q)) comps.push_back(component_for(p, k));
  for (const auto& c : comps) {
    for (i64 o : c.orders) {
      g->orders.push_back(o);
      g->exponent = std::lcm(g->exponent, o);
    }
  }
  const std::size_t r = g->rank();
  g->dlog.assign(static_cast<std::size_t>(q) * r, 0);
  g->unit.assign(static_cast<std::size_t>(q), false);
  for (i64 a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    g->unit[static_cast<std::size_t>(a)] = true;
    std::size_t slot = static_cast<std::size_t>(a) * r;
    for (const auto& c : comps) {
      for (std::int32_t e : c.log[static_cast<std::size_t>(a % c.modulus)]) g->dlog[slot++] = e;
    }
  }
  g->roots.resize(static_cast<std::size_t>(g->exponent));
  for (i64 j = 0; j < g->exponent; ++j) {
    g->roots[static_cast<std::size_t>(j)] =
        unit_root(static_cast<long double>(j) / static_cast<long double>(g->exponent));
  }
  return g;
}

}  // namespace

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroup> group,
                                       std::vector<i64> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  if (exponents_.size() != group_->rank()) {
    throw ParameterError(fmt::format("character mod {} needs {} exponents, got {}", group_->q,
                                     group_->rank(), exponents_.size()));
  }
  scale_.resize(exponents_.size());
  for (std::size_t j = 0; j < exponents_.size(); ++j) {
    const i64 order = group_->orders[j];
    if (exponents_[j] < 0 || exponents_[j] >= order) {
      throw ParameterError(fmt::format("exponent {} out of range for a cyclic factor of order {}",
                                       exponents_[j], order));
    }
    scale_[j] = exponents_[j] * (group_->exponent / order);
    if (exponents_[j] != 0) principal_ = false;
  }
}

std::int32_t DirichletCharacter::index(i64 n) const {
  const i64 q = group_->q;
  const i64 a = ((n % q) + q) % q;
  if (!group_->unit[static_cast<std::size_t>(a)]) return -1;
  const std::size_t r = group_->rank();
  i64 idx = 0;
  for (std::size_t j = 0; j < r; ++j) {
    idx += scale_[j] * group_->dlog[static_cast<std::size_t>(a) * r + j];
  }
  return static_cast<std::int32_t>(idx % group_->exponent);
}

cplx DirichletCharacter::operator()(i64 n) const {
  const std::int32_t idx = index(n);
  return idx < 0 ? cplx{0.0, 0.0} : group_->roots[static_cast<std::size_t>(idx)];
}

std::vector<cplx> DirichletCharacter::table() const {
  std::vector<cplx> out(static_cast<std::size_t>(modulus()));
  for (i64 a = 0; a < modulus(); ++a) out[static_cast<std::size_t>(a)] = (*this)(a);
  return out;
}

bool DirichletCharacter::is_real() const {
  for (std::size_t j = 0; j < exponents_.size(); ++j) {
    if ((2 * exponents_[j]) % group_->orders[j] != 0) return false;
  }
  return true;
}

i64 DirichletCharacter::conductor() const {
  const i64 q = modulus();
  for (i64 d = 1; d <= q; ++d) {
    if (q % d != 0) continue;
    bool induced = true;
    for (i64 a = 1; a < q + 1 && induced; a += d) {
      const std::int32_t idx = index(a);
      if (idx > 0) induced = false;
    }
    if (induced) return d;
  }
  return q;
}

CharacterTable characters_mod_q(i64 q) {
  if (q < 1 || q > kMaxModulus) {
    throw ParameterError(fmt::format("modulus q = {} outside the supported range [1, {}]", q,
                                     kMaxModulus));
  }
  auto group = build_unit_group(q);
  CharacterTable table;
  table.q = q;
  std::vector<i64> exps(group->rank(), 0);
  while (true) {
    table.chars.emplace_back(group, exps);
    // Odometer with the first coordinate most significant.
    std::size_t j = exps.size();
    while (j > 0) {
      --j;
      if (++exps[j] < group->orders[j]) break;
      exps[j] = 0;
      if (j == 0) return table;
    }
    if (exps.empty()) return table;
  }
}

cplx gauss_sum(const DirichletCharacter& chi) {
  const i64 q = chi.modulus();
  CompensatedComplexSum acc;
  for (i64 n = 1; n <= q; ++n) {
    const cplx c = chi(n);
    if (c == cplx{0.0, 0.0}) continue;
    acc.add(unit_root(static_cast<long double>(n) / static_cast<long double>(q)) * c);
  }
  return acc.value();
}

DirichletPoly::DirichletPoly(i64 lo, i64 hi) : lo_(lo), hi_(hi) {
  if (lo < 0 || hi < lo) throw ParameterError(fmt::format("bad polynomial window ({}, {}]", lo, hi));
}

void DirichletPoly::add(i64 n, cplx c) {
  if (n <= lo_ || n > hi_) {
    throw RangeError(fmt::format("coefficient index {} outside ({}, {}]", n, lo_, hi_));
  }
  coeffs_[n] += c;
}

cplx DirichletPoly::eval(cplx s) const {
  CompensatedComplexSum acc;
  for (const auto& [n, c] : coeffs_) acc.add(c * power_neg(n, s));
  return acc.value();
}

DirichletPoly e2_polynomial(const DirichletCharacter& chi, i64 x, const sieve::E2Params& params,
                            bool weighted) {
  if (x < 1) throw ParameterError(fmt::format("X = {} must be positive", x));
  params.validate_for_window(x);
  const auto seg = sieve::build_spf_segment(x, x);
  const auto w = weighted ? sieve::weights_varpi2(seg, params) : sieve::indicator_e2(seg, params);
  DirichletPoly poly(x, 2 * x);
  for (i64 i = 0; i < w.len(); ++i) {
    const double v = w.values[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    const i64 n = x + 1 + i;
    const cplx c = chi(n);
    if (c != cplx{0.0, 0.0}) poly.add(n, v * c);
  }
  return poly;
}

cplx eval_F(double t, const DirichletCharacter& chi, i64 x, const sieve::E2Params& params,
            bool weighted) {
  return e2_polynomial(chi, x, params, weighted).eval_line(t);
}

FactorizationReport factorization_check(i64 x, const sieve::E2Params& params, double u, cplx s,
                                        const DirichletCharacter& chi) {
  if (params.variant() != sieve::E2Params::Variant::Restricted) {
    throw ParameterError("the factorisation check uses restricted E2 parameters");
  }
  if (!(u >= 1.0) || !std::isfinite(u)) {
    throw ParameterError(fmt::format("block parameter U = {} must be finite and >= 1", u));
  }
  const DirichletPoly f = e2_polynomial(chi, x, params);

  const i64 m_lo = params.lower() + 1;
  const i64 m_hi = params.upper();
  const long double ul = u;
  const long double xl = static_cast<long double>(x);
  auto block_of = [&](i64 m) {
    return static_cast<i64>(std::floor(ul * std::log(static_cast<long double>(m))));
  };

  FactorizationReport rep;
  rep.x = x;
  rep.u = u;
  // Blocks indexed by floor(U log m) cover every integer of [M, M'] exactly once.
  rep.v_lo = block_of(m_lo);
  rep.v_hi = block_of(m_hi);
  rep.terms_f = f.coeffs().size();
  rep.f_value = f.eval(s);

  const i64 n_cap = static_cast<i64>(std::floor(2.0L * xl * std::exp(-static_cast<long double>(
                                                    rep.v_lo) / ul))) + 1;
  std::vector<bool> prime(static_cast<std::size_t>(n_cap + 1), false);
  for (i64 p : arith::primes_up_to(n_cap)) prime[static_cast<std::size_t>(p)] = true;

  std::map<i64, cplx> blocks;
  CompensatedComplexSum blocks_value;
  for (i64 v = rep.v_lo; v <= rep.v_hi; ++v) {
    std::vector<i64> ms;
    for (i64 m = std::max(m_lo, static_cast<i64>(std::floor(std::exp(v / ul))) - 1);
         m <= m_hi; ++m) {
      const i64 bm = block_of(m);
      if (bm > v) break;
      if (bm == v && prime[static_cast<std::size_t>(m)] && chi(m) != cplx{0.0, 0.0}) {
        ms.push_back(m);
      }
    }
    const long double n_lo = xl * std::exp(-static_cast<long double>(v) / ul);
    const long double n_hi = 2.0L * n_lo;
    std::vector<i64> ns;
    for (i64 n = static_cast<i64>(std::floor(n_lo)) + 1;
         n <= std::min<i64>(n_cap, static_cast<i64>(std::floor(n_hi))); ++n) {
      if (static_cast<long double>(n) > n_lo && prime[static_cast<std::size_t>(n)] &&
          chi(n) != cplx{0.0, 0.0}) {
        ns.push_back(n);
      }
    }
    ++rep.blocks;
    CompensatedComplexSum a_v, b_v;
    for (i64 m : ms) a_v.add(chi(m) * power_neg(m, s));
    for (i64 n : ns) b_v.add(chi(n) * power_neg(n, s));
    blocks_value.add(a_v.value() * b_v.value());
    for (i64 m : ms) {
      for (i64 n : ns) blocks[m * n] += chi(m) * chi(n);
    }
  }
  rep.blocks_value = blocks_value.value();

  // sum_{k = mn} |a_m b_n| over every admissible factorisation of k.
  auto pair_bound = [&](i64 k) {
    double total = 0.0;
    for (i64 m = m_lo; m <= m_hi; ++m) {
      if (k % m != 0 || !prime[static_cast<std::size_t>(m)]) continue;
      const i64 n = k / m;
      if (n <= n_cap && prime[static_cast<std::size_t>(n)]) total += std::abs(chi(m) * chi(n));
    }
    return total;
  };

  std::map<i64, cplx> diff = blocks;  // d_k = F_k - (sum A_v B_v)_k, negated below
  for (const auto& [k, c] : f.coeffs()) diff[k] -= c;

  const long double inner_lo = xl * std::exp(-1.0L / ul);
  const long double inner_hi = xl * std::exp(1.0L / ul);
  const long double outer_hi = 2.0L * xl * std::exp(1.0L / ul);
  const long double slack = 1e-12L * outer_hi;

  CompensatedComplexSum boundary_value;
  CompensatedSum scale;
  rep.max_bound_slack = -std::numeric_limits<double>::infinity();
  for (const auto& [k, dneg] : diff) {
    const cplx d = -dneg;
    const double bound = pair_bound(k);
    scale.add(bound * std::abs(power_neg(k, s)));
    if (std::abs(d) <= kCoeffTol) continue;
    const long double kl = static_cast<long double>(k);
    const bool inner = kl >= inner_lo - slack && kl <= inner_hi + slack;
    const bool outer = kl >= 2.0L * xl - slack && kl <= outer_hi + slack;
    if (!inner && !outer) {
      throw IdentityError(fmt::format(
          "boundary coefficient d_{} = {:.3g} lies outside [Xe^(-1/U), Xe^(1/U)] u [2X, 2Xe^(1/U)]"
          " for X={}, U={}",
          k, std::abs(d), x, u));
    }
    rep.max_bound_slack = std::max(rep.max_bound_slack, std::abs(d) - bound);
    if (std::abs(d) > bound + kCoeffTol) {
      throw IdentityError(fmt::format("|d_{}| = {:.6g} exceeds sum |a_m b_n| = {:.6g}", k,
                                      std::abs(d), bound));
    }
    ++rep.boundary_terms;
    boundary_value.add(d * power_neg(k, s));
  }
  if (rep.boundary_terms == 0) rep.max_bound_slack = 0.0;
  rep.boundary_value = boundary_value.value();
  const double denom = scale.value();
  const double gap = std::abs(rep.f_value - rep.blocks_value - rep.boundary_value);
  rep.residual = denom > 0.0 ? gap / denom : gap;
  return rep;
}

MeanSquareReport mean_square(const DirichletPoly& poly, i64 q, double t0, double t1,
                             double step) {
  if (!(t0 < t1)) throw ParameterError(fmt::format("need T0 < T, got [{}, {}]", t0, t1));
  if (!(step > 0.0)) throw ParameterError(fmt::format("grid step {} must be positive", step));
  if (q < 1) throw ParameterError(fmt::format("modulus q = {} must be positive", q));
  const auto intervals =
      std::max<i64>(1, static_cast<i64>(std::ceil((t1 - t0) / step - 1e-12)));
  std::vector<double> ts(static_cast<std::size_t>(intervals + 1));
  for (i64 j = 0; j < intervals; ++j) ts[static_cast<std::size_t>(j)] = t0 + static_cast<double>(j) * step;
  ts.back() = t1;
  std::vector<double> vals(ts.size());
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < ts.size(); ++j) vals[j] = std::norm(poly.eval_line(ts[j]));
  CompensatedSum integral;
  for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
    integral.add(0.5 * (ts[j + 1] - ts[j]) * (vals[j] + vals[j + 1]));
  }
  MeanSquareReport rep;
  rep.nodes = ts.size();
  rep.integral = integral.value();
  CompensatedSum energy;
  for (const auto& [n, c] : poly.coeffs()) {
    const double nd = static_cast<double>(n);
    energy.add(std::norm(c) / (nd * nd));
  }
  const double phi = static_cast<double>(arith::euler_phi(q));
  const double t_len = std::max(std::abs(t0), std::abs(t1));
  rep.mvt_rhs = (phi * t_len + phi / static_cast<double>(q) * static_cast<double>(poly.lo())) *
                energy.value();
  rep.ratio = rep.mvt_rhs > 0.0 ? rep.integral / rep.mvt_rhs : 0.0;
  return rep;
}

MeanSquareReport empirical_mean_square(const DirichletCharacter& chi, i64 x,
                                       const sieve::E2Params& params, double t0, double t1,
                                       double step) {
  return mean_square(e2_polynomial(chi, x, params), chi.modulus(), t0, t1, step);
}

}  // namespace apc::dirichlet
