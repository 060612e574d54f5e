#include "conic_lab/expsum.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "conic_lab/errors.hpp"

namespace conic_lab {

namespace {

constexpr u64 kMaxDirectModulus = 10'000'000;

// F1, F2 with coefficients reduced mod q, for fast repeated evaluation.
struct ReducedRational {
  std::vector<u64> numer;
  std::vector<u64> denom;
  u64 q;

  ReducedRational(const IntRationalFunction& f, u64 modulus) : q(modulus) {
    for (const auto& c : f.numer.coefficients()) numer.push_back(mpz_mod(c, q));
    for (const auto& c : f.denom.coefficients()) denom.push_back(mpz_mod(c, q));
  }

  static u64 horner(const std::vector<u64>& c, u64 t, u64 q) {
    u64 acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = add_mod(mul_mod(acc, t, q), *it, q);
    return acc;
  }

  std::optional<u64> operator()(u64 t) const {
    t %= q;
    const u64 d = horner(denom, t, q);
    if (std::gcd(d, q) != 1) return std::nullopt;
    return mul_mod(horner(numer, t, q), mod_inverse(static_cast<i64>(d), q), q);
  }
};

void require_direct_budget(const PrimePowerModulus& pp) {
  if (pp.q() > kMaxDirectModulus) throw BudgetExceeded("direct exponential sum: q exceeds 10^7");
}

u64 reduce_signed(i64 v, u64 q) { return reduce_mod(v, q); }

// k = p^ord * unit mod q; ord = n when k = 0 mod q.
unsigned ord_mod(u64 k, const PrimePowerModulus& pp) {
  if (k == 0) return pp.n();
  unsigned e = 0;
  while (k % pp.p() == 0) {
    k /= pp.p();
    ++e;
  }
  return e;
}

struct DerivativeData {
  int r;
  Polynomial reduced;  // p^-r (F1' F2 - F1 F2')
};

DerivativeData derivative_data(const IntRationalFunction& f, u64 p) {
  if (f.denom.is_zero()) throw DomainError("rational function with zero denominator");
  if (f.denom.content_ord(p) != 0) throw DomainError("denominator vanishes identically mod p");
  const Polynomial P = f.derivative_numer();
  if (P.is_zero()) throw DomainError("f is constant; ord_p(f') is undefined");
  const unsigned r = P.content_ord(p);
  return {static_cast<int>(r), P.divided_by_power(p, r)};
}

unsigned root_multiplicity(const Polynomial& P, u64 alpha, u64 p) {
  const auto shifted = P.taylor_shift_mod(alpha, p);
  unsigned k = 0;
  while (k < shifted.size() && shifted[k] == 0) ++k;
  return k;
}

// Newton iteration for a simple root of P mod p^e starting from alpha.
u64 lift_simple_root(const Polynomial& P, u64 alpha, u64 modulus) {
  const Polynomial dP = P.derivative();
  u64 x = alpha % modulus;
  for (int iter = 0; iter < 128; ++iter) {
    const u64 v = P.eval_mod(x, modulus);
    if (v == 0) return x;
    const u64 slope = dP.eval_mod(x, modulus);
    x = sub_mod(x, mul_mod(v, mod_inverse(static_cast<i64>(slope), modulus), modulus), modulus);
  }
  throw std::logic_error("Newton lifting did not converge");
}

// A(alpha) = 2 (P' F2 - 2 P F2') / F2^3 mod p.
u64 second_derivative_unit(const Polynomial& P, const IntRationalFunction& f, u64 x, u64 p) {
  const u64 d = f.denom.eval_mod(x, p);
  const u64 dd = f.denom.derivative().eval_mod(x, p);
  const u64 top = sub_mod(mul_mod(P.derivative().eval_mod(x, p), d, p), mul_mod(2, mul_mod(P.eval_mod(x, p), dd, p), p), p);
  const u64 inv_d = mod_inverse(static_cast<i64>(d), p);
  return mul_mod(2, mul_mod(top, mul_mod(inv_d, mul_mod(inv_d, inv_d, p), p), p), p);
}

// Taylor coefficients c_0, ..., c_terms of f(alpha + h) mod m.
std::vector<u64> taylor_series_mod(const IntRationalFunction& f, u64 alpha, u64 m, unsigned terms) {
  auto top = f.numer.taylor_shift_mod(alpha, m);
  auto bottom = f.denom.taylor_shift_mod(alpha, m);
  top.resize(std::max<std::size_t>(top.size(), terms + 1), 0);
  bottom.resize(std::max<std::size_t>(bottom.size(), terms + 1), 0);
  const u64 inv0 = mod_inverse(static_cast<i64>(bottom[0]), m);
  std::vector<u64> c(terms + 1, 0);
  for (unsigned k = 0; k <= terms; ++k) {
    u64 acc = top[k];
    for (unsigned i = 1; i <= k; ++i) acc = sub_mod(acc, mul_mod(bottom[i], c[k - i], m), m);
    c[k] = mul_mod(acc, inv0, m);
  }
  return c;
}

// The stationary-phase evaluation needs p^r | c_k for every k >= 2. This can
// fail when p divides an exponent of f (p <= degree), e.g. 3 | f'(t) for
// f = t^3 while f'''/6 = 1.
void require_taylor_valuations(const IntRationalFunction& f, u64 alpha, const PrimePowerModulus& pp, unsigned r) {
  const auto c = taylor_series_mod(f, alpha, pp.q(), pp.n());
  const u64 pr = pp.power(r);
  for (unsigned k = 2; k < c.size(); ++k) {
    if (c[k] % pr != 0) {
      throw UnsupportedCase("cochrane_evaluate: Taylor coefficient of order " + std::to_string(k) +
                            " at alpha has p-adic order below r = " + std::to_string(r));
    }
  }
}

double half_power(u64 p, unsigned twice_exponent) {
  return std::pow(static_cast<double>(p), static_cast<double>(twice_exponent) / 2.0);
}

ComplexValue normalized_gauss(u64 p) { return gauss_sum(p) / std::sqrt(static_cast<double>(p)); }

}  // namespace

Polynomial IntRationalFunction::derivative_numer() const {
  return numer.derivative() * denom - numer * denom.derivative();
}

std::string IntRationalFunction::to_string() const {
  return "(" + numer.to_string() + ") / (" + denom.to_string() + ")";
}

u64 eval_mod(const IntRationalFunction& f, u64 t, u64 q) {
  const u64 d = f.denom.eval_mod(t, q);
  if (std::gcd(d, q) != 1) throw DomainError("eval_mod: denominator is not a unit at t = " + std::to_string(t));
  return mul_mod(f.numer.eval_mod(t, q), mod_inverse(static_cast<i64>(d), q), q);
}

int ord_p_derivative(const IntRationalFunction& f, u64 p) {
  if (f.denom.is_zero()) throw DomainError("rational function with zero denominator");
  const Polynomial P = f.derivative_numer();
  if (P.is_zero()) throw DomainError("ord_p_derivative: f is constant");
  return static_cast<int>(P.content_ord(p)) - 2 * static_cast<int>(f.denom.content_ord(p));
}

ComplexValue direct_S_alpha(const IntRationalFunction& f, u64 alpha, const PrimePowerModulus& pp) {
  require_direct_budget(pp);
  const u64 p = pp.p();
  const u64 q = pp.q();
  const ReducedRational g(f, q);
  KahanSum sum;
  for (u64 t = alpha % p; t < q; t += p) {
    auto v = g(t);
    if (!v) throw DomainError("direct_S_alpha: denominator is not a unit on the class of alpha");
    sum.add(unit_phase(*v, q));
  }
  return sum.value();
}

ComplexValue direct_full_sum(const IntRationalFunction& f, const PrimePowerModulus& pp) {
  require_direct_budget(pp);
  const u64 q = pp.q();
  const ReducedRational g(f, q);
  KahanSum sum;
  for (u64 t = 0; t < q; ++t) {
    auto v = g(t);
    if (!v) throw DomainError("direct_full_sum: denominator is not a unit at t = " + std::to_string(t));
    sum.add(unit_phase(*v, q));
  }
  return sum.value();
}

CriticalPointReport critical_points(const IntRationalFunction& f, const PrimePowerModulus& pp) {
  const u64 p = pp.p();
  const unsigned n = pp.n();
  const DerivativeData dd = derivative_data(f, p);
  CriticalPointReport report;
  report.r = dd.r;
  const bool liftable = dd.r + 2 <= static_cast<int>(n);
  if (liftable) report.lift_exponent = static_cast<unsigned>((static_cast<int>(n) - dd.r + 1) / 2);
  for (u64 alpha = 0; alpha < p; ++alpha) {
    if (f.denom.eval_mod(alpha, p) == 0 || dd.reduced.eval_mod(alpha, p) != 0) continue;
    CriticalRoot root;
    root.alpha = alpha;
    root.multiplicity = root_multiplicity(dd.reduced, alpha, p);
    if (root.multiplicity == 1 && liftable) {
      root.lifted = lift_simple_root(dd.reduced, alpha, pp.power(report.lift_exponent));
      root.second_deriv_unit = second_derivative_unit(dd.reduced, f, *root.lifted, p);
    }
    report.roots.push_back(root);
  }
  return report;
}

ComplexValue cochrane_evaluate(const IntRationalFunction& f, u64 alpha, const PrimePowerModulus& pp) {
  const u64 p = pp.p();
  const unsigned n = pp.n();
  alpha %= p;
  const DerivativeData dd = derivative_data(f, p);
  if (f.denom.eval_mod(alpha, p) == 0) throw DomainError("cochrane_evaluate: denominator vanishes at alpha");
  if (dd.r + 2 > static_cast<int>(n)) {
    throw UnsupportedCase("cochrane_evaluate: r = " + std::to_string(dd.r) + " exceeds n - 2");
  }
  require_taylor_valuations(f, alpha, pp, static_cast<unsigned>(dd.r));
  if (dd.reduced.eval_mod(alpha, p) != 0) return {0.0, 0.0};
  if (root_multiplicity(dd.reduced, alpha, p) > 1) {
    throw UnsupportedCase("cochrane_evaluate: alpha = " + std::to_string(alpha) + " is a multiple critical point");
  }

  const unsigned r = static_cast<unsigned>(dd.r);
  const unsigned lift_exponent = (n - r + 1) / 2;
  const u64 star = lift_simple_root(dd.reduced, alpha, pp.power(lift_exponent));
  ComplexValue value = unit_phase(eval_mod(f, star, pp.q()), pp.q()) * half_power(p, n + r);
  if ((n - r) % 2 == 1) {
    const u64 A = second_derivative_unit(dd.reduced, f, star, p);
    value *= static_cast<double>(jacobi(static_cast<i64>(A), static_cast<i64>(p))) * normalized_gauss(p);
  }
  return value;
}

IntRationalFunction family_case1(i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs, u64 b,
                                 const PrimePowerModulus& pp) {
  (void)pp;
  const auto& a = coeffs.integers();
  const mpz_class a1 = static_cast<long>(a[0]), a2 = static_cast<long>(a[1]);
  const mpz_class B = static_cast<unsigned long>(b);
  const mpz_class X = static_cast<long>(x3), K1 = static_cast<long>(k1), K2 = static_cast<long>(k2);
  // k2 b a1 + 2 k1 b a2 t - k2 b a2 t^2
  Polynomial numer(std::vector<mpz_class>{X * K2 * B * a1, X * 2 * K1 * B * a2, -X * K2 * B * a2});
  Polynomial denom(std::vector<mpz_class>{a1, 0, a2});
  return {std::move(numer), std::move(denom)};
}

IntRationalFunction family_case2(unsigned s, i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs,
                                 const BasePoint& base, const PrimePowerModulus& pp) {
  if (s > pp.n()) throw DomainError("family_case2: layer index exceeds n");
  const auto& a = coeffs.integers();
  const mpz_class a1 = static_cast<long>(a[0]), a2 = static_cast<long>(a[1]);
  const mpz_class A = static_cast<unsigned long>(base.a), B = static_cast<unsigned long>(base.b);
  const mpz_class X = static_cast<long>(x3), K1 = static_cast<long>(k1), K2 = static_cast<long>(k2);
  mpz_class ps, p2s;
  mpz_ui_pow_ui(ps.get_mpz_t(), pp.p(), s);
  p2s = ps * ps;
  // y1 numerator: a a1 p^2s + 2 a2 b p^s t - a a2 t^2
  // y2 numerator: b a1 p^2s - 2 a1 a p^s t - b a2 t^2
  const mpz_class c0 = K1 * A * a1 * p2s + K2 * B * a1 * p2s;
  const mpz_class c1 = K1 * 2 * a2 * B * ps - K2 * 2 * a1 * A * ps;
  const mpz_class c2 = -K1 * A * a2 - K2 * B * a2;
  Polynomial numer(std::vector<mpz_class>{X * c0, X * c1, X * c2});
  Polynomial denom(std::vector<mpz_class>{a1 * p2s, 0, a2});
  return {std::move(numer), std::move(denom)};
}

ComplexValue case2_layer_sum(unsigned s, i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs,
                             const BasePoint& base, const PrimePowerModulus& pp) {
  require_direct_budget(pp);
  const u64 p = pp.p();
  const u64 q = pp.q();
  const unsigned n = pp.n();
  const ReducedRational g(family_case2(s, k1, k2, x3, coeffs, base, pp), q);
  KahanSum sum;
  auto add = [&](u64 t) {
    auto v = g(t);
    if (!v) throw DomainError("case2_layer_sum: denominator is not a unit at t = " + std::to_string(t));
    sum.add(unit_phase(*v, q));
  };
  if (s == 0) {
    for (u64 t = 0; t < q; ++t) add(t);
  } else if (s < n) {
    const u64 limit = pp.power(n - s);
    for (u64 t = 1; t <= limit; ++t) {
      if (t % p != 0) add(t);
    }
  } else {
    add(1);
  }
  return sum.value();
}

namespace {

u64 case1_b(const CoefficientTriple& coeffs, const PrimePowerModulus& pp) {
  const u64 q = pp.q();
  const u64 target = mul_mod(sub_mod(0, coeffs[2], q), mod_inverse(static_cast<i64>(coeffs[1]), q), q);
  auto b = sqrt_mod_prime_power(static_cast<i64>(target), pp);
  if (!b) throw DomainError("Case I amplitude needs -alpha_3/alpha_2 to be a square mod p");
  return *b;
}

}  // namespace

ComplexValue direct_E(i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                      ParamCase case_tag) {
  const u64 p = pp.p();
  if (case_tag == ParamCase::CaseII) {
    if (classify(coeffs, p) != ParamCase::CaseII) throw DomainError("direct_E: coefficients are not Case II");
    const BasePoint base = find_base_point(coeffs, pp);
    KahanSum sum;
    for (unsigned s = 0; s <= pp.n(); ++s) sum.add(case2_layer_sum(s, k1, k2, x3, coeffs, base, pp));
    return sum.value();
  }
  const u64 b = case1_b(coeffs, pp);
  const IntRationalFunction f = family_case1(k1, k2, x3, coeffs, b, pp);
  const u64 a1 = coeffs[0] % p, a2 = coeffs[1] % p;
  KahanSum sum;
  for (u64 alpha = 1; alpha < p; ++alpha) {
    const u64 t2 = mul_mod(a2, mul_mod(alpha, alpha, p), p);
    if (t2 == a1 || add_mod(a1, t2, p) == 0) continue;
    sum.add(direct_S_alpha(f, alpha, pp));
  }
  return sum.value();
}

ComplexValue closed_form_E(i64 k1, i64 k2, i64 x3, const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                           ParamCase case_tag) {
  const u64 p = pp.p();
  const u64 q = pp.q();
  const unsigned n = pp.n();
  const u64 k1r = reduce_signed(k1, q), k2r = reduce_signed(k2, q), x3r = reduce_signed(x3, q);
  if (x3r % p == 0) throw DomainError("closed_form_E: x3 must be a unit");
  if (case_tag == ParamCase::CaseII && classify(coeffs, p) != ParamCase::CaseII) {
    throw DomainError("closed_form_E: coefficients are not Case II");
  }
  const u64 b = case_tag == ParamCase::CaseI ? case1_b(coeffs, pp) : 1;

  const unsigned o1 = ord_mod(k1r, pp), o2 = ord_mod(k2r, pp);
  const unsigned r = std::min(o1, o2);
  if (r + 2 > n) throw UnsupportedCase("closed_form_E: r = " + std::to_string(r) + " exceeds n - 2");
  if (o1 != o2) return {0.0, 0.0};

  const PrimePowerModulus inner(p, n - r);
  const u64 m = inner.q();
  const u64 l1 = (k1r / pp.power(r)) % m, l2 = (k2r / pp.power(r)) % m;
  const u64 a1 = coeffs[0] % m, a2 = coeffs[1] % m, a3 = coeffs[2] % m;
  u64 D = add_mod(mul_mod(mul_mod(a1, a2, m), mul_mod(l1, l1, m), m), mul_mod(mul_mod(a1, a1, m), mul_mod(l2, l2, m), m), m);
  if (case_tag == ParamCase::CaseII) {
    D = mul_mod(D, mul_mod(sub_mod(0, a3, m), mod_inverse(static_cast<i64>(a2), m), m), m);
  }
  if (D % p == 0) throw UnsupportedCase("closed_form_E: D = 0 mod p (double critical point)");
  if (jacobi(static_cast<i64>(D % p), static_cast<i64>(p)) < 0) return {0.0, 0.0};

  const u64 root = *sqrt_mod_prime_power(static_cast<i64>(D), inner);
  const u64 c = mul_mod(mul_mod(b % m, x3r % m, m), mod_inverse(static_cast<i64>(a1), m), m);
  const u64 phase = mul_mod(c, root, m);
  const ComplexValue plus = unit_phase(phase, m);
  const ComplexValue minus = unit_phase(sub_mod(0, phase, m), m);
  const double scale = half_power(p, n + r);
  if ((n - r) % 2 == 0) return scale * (plus + minus);

  const u64 w = sub_mod(0, mul_mod(2, mul_mod(b % p, mul_mod(x3r % p, a2 % p, p), p), p), p);
  const u64 ws = mul_mod(w, root % p, p);
  const double sp = jacobi(static_cast<i64>(ws), static_cast<i64>(p));
  const double sm = jacobi(static_cast<i64>(sub_mod(0, ws, p)), static_cast<i64>(p));
  return scale * normalized_gauss(p) * (sp * plus + sm * minus);
}

}  // namespace conic_lab
