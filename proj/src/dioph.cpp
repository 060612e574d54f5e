#include "conic_lab/dioph.hpp"

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "conic_lab/errors.hpp"

namespace conic_lab {

namespace {

i128 isqrt(i128 v) {
  if (v < 0) return -1;
  i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

mpz_class to_mpz(u64 v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

u64 to_u64(const mpz_class& v) {
  if (!mpz_fits_ulong_p(v.get_mpz_t())) throw DomainError("value does not fit in 64 bits");
  return v.get_ui();
}

// Least x >= 1 with x^5 * scale >= target.
mpz_class least_fifth_root_bound(const mpz_class& target, const mpz_class& scale) {
  mpz_class lo = 1, hi = 1;
  auto ok = [&](const mpz_class& x) {
    mpz_class x5;
    mpz_pow_ui(x5.get_mpz_t(), x.get_mpz_t(), 5);
    return x5 * scale >= target;
  };
  while (!ok(hi)) hi *= 2;
  while (lo < hi) {
    mpz_class mid = (lo + hi) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

i64 narrow(i128 v, const char* what) {
  if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min()) {
    throw DomainError(std::string("reduce_coefficients: ") + what + " overflows 64 bits");
  }
  return static_cast<i64>(v);
}

}  // namespace

i64 count_equation_solutions(const BinaryQuadraticInstance& inst) {
  if (inst.x < 0) throw DomainError("box half-width must be nonnegative");
  i64 count = 0;
  for (i64 X = -inst.x; X <= inst.x; ++X) {
    const i128 rest = static_cast<i128>(inst.C) - static_cast<i128>(inst.A) * X * X;
    if (inst.B == 0) {
      if (rest == 0) count += 2 * inst.x + 1;
      continue;
    }
    if (rest % inst.B != 0) continue;
    const i128 y2 = rest / inst.B;
    const i128 y = isqrt(y2);
    if (y < 0 || y * y != y2 || y > inst.x) continue;
    count += y == 0 ? 1 : 2;
  }
  return count;
}

u64 divisor_count(u64 k) {
  if (k == 0) throw DomainError("divisor_count: k must be positive");
  u64 count = 1;
  for (u64 d = 2; d <= k / d; ++d) {
    unsigned e = 0;
    while (k % d == 0) {
      k /= d;
      ++e;
    }
    count *= e + 1;
  }
  if (k > 1) count *= 2;
  return count;
}

bool Approximant::satisfies_bound() const {
  if (r < 1 || r > Q || std::gcd(a < 0 ? -a : a, r) != 1) return false;
  // |num r - a den| Q <= den
  const mpz_class diff = to_mpz(target_num) * r - mpz_class(static_cast<long>(a)) * to_mpz(target_den);
  return abs(diff) * Q <= to_mpz(target_den);
}

Approximant dirichlet_approx(u64 beta, u64 q, i64 Q) {
  if (Q < 1) throw DomainError("dirichlet_approx: Q must be >= 1");
  if (q == 0) throw DomainError("dirichlet_approx: q must be positive");
  Approximant out;
  out.Q = Q;
  out.target_num = beta;
  out.target_den = q;

  // Convergents h/k of beta/q, seeded with h_{-2}/k_{-2} = 0/1 and h_{-1}/k_{-1} = 1/0.
  i128 h_prev = 0, h = 1;
  i128 k_prev = 1, k = 0;
  i128 num = beta, den = q;
  i128 best_h = 0, best_k = 1;
  while (den != 0) {
    const i128 a = num / den;
    const i128 h_next = a * h + h_prev;
    const i128 k_next = a * k + k_prev;
    if (k_next > Q) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    best_h = h;
    best_k = k;
    const i128 rem = num - a * den;
    num = den;
    den = rem;
  }
  out.a = static_cast<i64>(best_h);
  out.r = static_cast<i64>(best_k);
  return out;
}

i64 count_F(u64 b1, u64 b2, i64 X, u64 q) {
  if (X < 1) throw DomainError("count_F: X must be positive");
  if (X > 1'000'000) throw BudgetExceeded("count_F: X limited to 10^6");
  const u64 ratio = mul_mod(mod_inverse(static_cast<i64>(b1 % q), q), b2 % q, q);
  const i64 qi = static_cast<i64>(q);
  i64 total = 0;
  for (i64 A2 = -X; A2 <= X; ++A2) {
    if (A2 == 0) continue;
    const i64 v = static_cast<i64>(mul_mod(ratio, reduce_mod(A2, q), q));
    total += floor_div(X - v, qi) - floor_div(-X - 1 - v, qi);
    if (v == 0) --total;  // A1 = 0 is excluded
  }
  return total;
}

ReducedCoefficients reduce_coefficients(u64 b1, u64 b2, u64 b3, const PrimePowerModulus& pp, i64 Q) {
  const u64 q = pp.q();
  for (u64 b : {b1, b2, b3}) {
    if (!pp.is_unit(b % q)) throw DomainError("reduce_coefficients: coefficients must be units mod p");
  }
  const u64 inv3 = mod_inverse(static_cast<i64>(b3 % q), q);
  const u64 c1 = mul_mod(b1 % q, inv3, q);
  const u64 c2 = mul_mod(b2 % q, inv3, q);
  ReducedCoefficients out;
  out.first = dirichlet_approx(c1, q, Q);
  out.second = dirichlet_approx(c2, q, Q);
  const i128 r1 = out.first.r, r2 = out.second.r;
  out.r = narrow(r1 * r2, "r");
  const i128 qq = static_cast<i128>(q);
  out.g1 = narrow(-static_cast<i128>(c1) * out.r + static_cast<i128>(out.first.a) * r2 * qq, "gamma_1");
  out.g2 = narrow(-static_cast<i128>(c2) * out.r + static_cast<i128>(out.second.a) * r1 * qq, "gamma_2");
  out.equivalent = out.r % static_cast<i64>(pp.p()) != 0;
  return out;
}

ParameterChoice choose_parameters(u64 q, u64 M) {
  if (M < 1 || M > q) throw DomainError("choose_parameters: need 1 <= M <= q");
  const mpz_class qz = to_mpz(q), Mz = to_mpz(M);
  const mpz_class M3 = Mz * Mz * Mz;
  ParameterChoice out;
  out.R = to_u64(least_fifth_root_bound(qz * qz, M3));
  out.Q = to_u64(least_fifth_root_bound(qz * qz * qz * M3, 1));
  return out;
}

ScaleParameters scale_parameters(const PrimePowerModulus& pp, unsigned r, double N, double eps) {
  if (r + 1 > pp.n()) throw DomainError("scale_parameters: need r + 1 <= n");
  if (!(N > 0)) throw DomainError("scale_parameters: N must be positive");
  const double q = static_cast<double>(pp.q());
  const double pr = static_cast<double>(pp.power(r));
  return {std::pow(q, 1.0 + eps) / (pr * N), q / (pr * static_cast<double>(pp.p()))};
}

}  // namespace conic_lab
