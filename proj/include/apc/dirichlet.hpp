#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "apc/sieve.hpp"

// Dirichlet characters, Gauss sums, and the Dirichlet polynomials
// F(s, chi) = sum chi(p1 p2) / (p1 p2)^s over restricted E2 numbers.
namespace apc::dirichlet {

using i64 = std::int64_t;
using cplx = std::complex<double>;

inline constexpr i64 kMaxModulus = 10'000;

/// Discrete logarithms of the units mod q with respect to a fixed generating set,
/// one cyclic factor per generator (odd p^k: a primitive root; 2^k: -1 and 5).
struct UnitGroup {
  i64 q = 1;
  i64 exponent = 1;                  // lcm of the cyclic orders
  std::vector<i64> orders;           // order of each generator
  std::vector<std::int32_t> dlog;    // dlog[a * rank + j] for units a
  std::vector<bool> unit;            // gcd(a, q) == 1
  std::vector<cplx> roots;           // e(j / exponent)
  std::size_t rank() const noexcept { return orders.size(); }
};

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const UnitGroup> group, std::vector<i64> exponents);

  i64 modulus() const noexcept { return group_->q; }
  const std::vector<i64>& exponents() const noexcept { return exponents_; }
  bool principal() const noexcept { return principal_; }

  /// chi(n) = e(index(n) / order_base()); index is -1 off the units.
  std::int32_t index(i64 n) const;
  i64 order_base() const noexcept { return group_->exponent; }
  cplx operator()(i64 n) const;

  /// chi(0..q-1) as complex numbers.
  std::vector<cplx> table() const;

  /// True when every value is real (the character has order <= 2).
  bool is_real() const;
  i64 conductor() const;
  bool primitive() const { return conductor() == modulus(); }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
  }

 private:
  std::shared_ptr<const UnitGroup> group_;
  std::vector<i64> exponents_;
  std::vector<i64> scale_;  // exponent / orders[j]
  bool principal_ = true;
};

struct CharacterTable {
  i64 q = 1;
  std::vector<DirichletCharacter> chars;  // principal character first
};

/// All phi(q) characters mod q, ordered lexicographically by exponent vector.
CharacterTable characters_mod_q(i64 q);

/// tau(chi) = sum_{n=1}^{q} e(n/q) chi(n).
cplx gauss_sum(const DirichletCharacter& chi);

/// Sparse sum_n c_n n^{-s} with support confined to the window (lo, hi].
class DirichletPoly {
 public:
  DirichletPoly(i64 lo, i64 hi);

  void add(i64 n, cplx c);
  const std::map<i64, cplx>& coeffs() const noexcept { return coeffs_; }
  i64 lo() const noexcept { return lo_; }
  i64 hi() const noexcept { return hi_; }
  bool empty() const noexcept { return coeffs_.empty(); }

  cplx eval(cplx s) const;
  cplx eval_line(double t) const { return eval({1.0, t}); }

 private:
  i64 lo_;
  i64 hi_;
  std::map<i64, cplx> coeffs_;
};

/// F(s, chi) on (X, 2X]; `weighted` multiplies each term by log p2.
DirichletPoly e2_polynomial(const DirichletCharacter& chi, i64 x, const sieve::E2Params& params,
                            bool weighted = false);

/// F(1 + it, chi).
cplx eval_F(double t, const DirichletCharacter& chi, i64 x, const sieve::E2Params& params,
            bool weighted = false);

struct FactorizationReport {
  i64 x = 0;
  double u = 1.0;
  i64 v_lo = 0;  // block range actually used
  i64 v_hi = -1;
  std::size_t blocks = 0;
  std::size_t terms_f = 0;         // nonzero coefficients of F
  std::size_t boundary_terms = 0;  // k with d_k != 0
  double max_bound_slack = 0.0;    // max over k of |d_k| - sum |a_m b_n| (<= 0 when the bound holds)
  cplx f_value;                    // F(s)
  cplx blocks_value;               // sum_v A_v(s) B_v(s)
  cplx boundary_value;             // sum_k d_k k^{-s}
  double residual = 0.0;           // |F - blocks - boundary| / sum |a_m b_n| k^{-Re s}
};

/// Checks the bilinear block decomposition of F with a_m = chi(m) on primes
/// m in (P, Pupper] and b_n = chi(n) on primes. Throws IdentityError on a
/// support or coefficient-bound violation.
FactorizationReport factorization_check(i64 x, const sieve::E2Params& params, double u, cplx s,
                                        const DirichletCharacter& chi);

struct MeanSquareReport {
  double integral = 0.0;  // trapezoid estimate of int_{T0}^{T} |F(1+it)|^2 dt
  double mvt_rhs = 0.0;   // (phi(q) T + phi(q) X / q) sum |a_n|^2 / n^2, T = max(|T0|, |T|)
  double ratio = 0.0;     // integral / mvt_rhs, 0 when the rhs vanishes
  std::size_t nodes = 0;
};

MeanSquareReport mean_square(const DirichletPoly& poly, i64 q, double t0, double t1, double step);
MeanSquareReport empirical_mean_square(const DirichletCharacter& chi, i64 x,
                                       const sieve::E2Params& params, double t0, double t1,
                                       double step);

}  // namespace apc::dirichlet
