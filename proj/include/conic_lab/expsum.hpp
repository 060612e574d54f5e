#pragma once

// Complete exponential sums S_alpha(f; p^n) = sum_{t = alpha (mod p)} e_{p^n}(f(t))
// for rational f = F1/F2 with integer coefficients: direct evaluation, the
// stationary-phase closed form, and the amplitude families that arise from
// the conic parametrizations.

#include <optional>
#include <vector>

#include "conic_lab/conic.hpp"
#include "conic_lab/modcore.hpp"
#include "conic_lab/polynomial.hpp"

namespace conic_lab {

struct IntRationalFunction {
  Polynomial numer;
  Polynomial denom{1};

  static IntRationalFunction polynomial(Polynomial p) { return {std::move(p), Polynomial{1}}; }
  // Numerator and denominator of f' = (F1' F2 - F1 F2') / F2^2, unreduced.
  Polynomial derivative_numer() const;
  std::string to_string() const;
};

// F1(t) / F2(t) mod q. Throws DomainError if F2(t) is not a unit.
u64 eval_mod(const IntRationalFunction& f, u64 t, u64 q);

// ord_p(F1' F2 - F1 F2') - 2 ord_p(F2). Throws DomainError when f' = 0.
int ord_p_derivative(const IntRationalFunction& f, u64 p);

// Direct sum over the p^(n-1) residues t = alpha (mod p). Needs q <= 10^7.
ComplexValue direct_S_alpha(const IntRationalFunction& f, u64 alpha, const PrimePowerModulus& pp);
// sum over every t mod q (the denominator must be a unit everywhere).
ComplexValue direct_full_sum(const IntRationalFunction& f, const PrimePowerModulus& pp);

struct CriticalRoot {
  u64 alpha = 0;
  unsigned multiplicity = 0;
  std::optional<u64> lifted;               // alpha* mod p^lift_exponent, simple roots only
  std::optional<u64> second_deriv_unit;    // A(alpha) mod p, simple roots only
};

struct CriticalPointReport {
  int r = 0;
  unsigned lift_exponent = 0;  // floor((n - r + 1) / 2)
  std::vector<CriticalRoot> roots;  // roots of p^-r f' mod p with F2(alpha) a unit
};

CriticalPointReport critical_points(const IntRationalFunction& f, const PrimePowerModulus& pp);

// S_alpha(f; p^n) from the critical points of f. Requires ord_p(F2) = 0,
// F2(alpha) a unit and r <= n - 2; throws UnsupportedCase for r > n - 2 or
// when alpha is a multiple root or a Taylor coefficient of order >= 2 at
// alpha is not divisible by p^r (possible when p <= deg f).
ComplexValue cochrane_evaluate(const IntRationalFunction& f, u64 alpha, const PrimePowerModulus& pp);

// x3 (2 k1 b a2 t + k2 b (a1 - a2 t^2)) / (a1 + a2 t^2)
IntRationalFunction family_case1(i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs, u64 b,
                                 const PrimePowerModulus& pp);

// x3 (k1 y1(t / p^s) + k2 y2(t / p^s)) with the Case II layer denominators
// cleared, i.e. numerators and denominator of case2_point.
IntRationalFunction family_case2(unsigned s, i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs,
                                 const BasePoint& base, const PrimePowerModulus& pp);

// sum over the parameters of layer s of e_q(family_case2(s, ...)(t)).
ComplexValue case2_layer_sum(unsigned s, i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs,
                             const BasePoint& base, const PrimePowerModulus& pp);

// E(k1, k2, x3; p^n) by direct summation. Case I: sum of S_alpha over the
// admissible classes alpha (alpha, a1 - a2 alpha^2, a1 + a2 alpha^2 units) with
// b the smaller root of -a3/a2. Case II: sum over every layer of the family,
// i.e. over all solution pairs.
ComplexValue direct_E(i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                      ParamCase case_tag);

// Closed form of direct_E. With p^r = (k1, k2, p^n), l_i = k_i / p^r, m = p^(n-r):
//   0 if ord_p(k1) != ord_p(k2) or D is a non-residue mod p, otherwise
//   p^((n+r)/2) sum_{s = +-1} C_s e_m(s c sqrt(D))
// where c = b x3 / a1 and D = a1 a2 l1^2 + a1^2 l2^2 (Case I), c = x3 / a1 and
// D = -a3/a2 (a1 a2 l1^2 + a1^2 l2^2) (Case II). C_s = 1 for n - r even, and
// (s w sqrt(D) / p) G_p / sqrt(p) otherwise, w = -2 b x3 a2 (Case I) or
// -2 x3 a2 (Case II). Throws UnsupportedCase for r > n - 2 or D = 0 mod p.
ComplexValue closed_form_E(i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                           ParamCase case_tag);

}  // namespace conic_lab
