#include "conic_lab/modcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "conic_lab/errors.hpp"

namespace conic_lab {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 reduce_mod(i64 v, u64 m) {
  i128 r = static_cast<i128>(v) % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

u64 reduce_mod(i128 v, u64 m) {
  i128 r = v % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are sufficient for every n < 2^64.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int jacobi(i64 a_signed, i64 m_signed) {
  if (m_signed <= 0 || m_signed % 2 == 0) {
    throw DomainError("jacobi: modulus must be odd and positive, got " + std::to_string(m_signed));
  }
  u64 m = static_cast<u64>(m_signed);
  u64 a = reduce_mod(a_signed, m);
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      u64 r = m & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if ((a & 3) == 3 && (m & 3) == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

u64 mod_inverse(i64 a, u64 q) {
  if (q == 0) throw DomainError("mod_inverse: modulus must be positive");
  if (q == 1) return 0;
  i128 old_r = reduce_mod(a, q), r = q;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 quotient = old_r / r;
    std::tie(old_r, r) = std::pair<i128, i128>{r, old_r - quotient * r};
    std::tie(old_s, s) = std::pair<i128, i128>{s, old_s - quotient * s};
  }
  if (old_r != 1) {
    throw DomainError("mod_inverse: " + std::to_string(a) + " is not a unit modulo " + std::to_string(q));
  }
  return reduce_mod(old_s, q);
}

PrimePowerModulus::PrimePowerModulus(u64 p, unsigned n) : p_(p), n_(n), q_(1) {
  if (p <= 2 || !is_prime(p)) {
    throw DomainError("modulus prime must be an odd prime, got " + std::to_string(p));
  }
  if (n < 1) throw DomainError("modulus exponent must be >= 1");
  powers_.reserve(n + 1);
  powers_.push_back(1);
  for (unsigned k = 1; k <= n; ++k) {
    if (q_ > kMaxModulus / p) {
      throw DomainError("modulus " + std::to_string(p) + "^" + std::to_string(n) + " exceeds 2^62");
    }
    q_ *= p;
    powers_.push_back(q_);
  }
}

CoefficientTriple::CoefficientTriple(i64 a1, i64 a2, i64 a3, const PrimePowerModulus& pp)
    : raw_{a1, a2, a3}, a_{pp.reduce(a1), pp.reduce(a2), pp.reduce(a3)}, q_(pp.q()) {
  for (u64 v : a_) {
    if (!pp.is_unit(v)) {
      throw DomainError("coefficient " + std::to_string(v) + " shares a factor with p = " +
                        std::to_string(pp.p()));
    }
  }
}

Rational Rational::make(i64 num, i64 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i64 g = std::gcd(num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

std::optional<u64> sqrt_mod_prime(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (pow_mod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);

  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;

  u64 m = s;
  u64 c = pow_mod(z, q, p);
  u64 t = pow_mod(a, q, p);
  u64 r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0;
    u64 t2 = t;
    while (t2 != 1) {
      t2 = mul_mod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

std::optional<u64> sqrt_mod_prime_power(i64 a_signed, const PrimePowerModulus& pp) {
  const u64 q = pp.q();
  const u64 a = pp.reduce(a_signed);
  if (!pp.is_unit(a)) {
    throw DomainError("sqrt_mod_prime_power: argument divisible by p; strip even powers of p first");
  }
  auto root = sqrt_mod_prime(a % pp.p(), pp.p());
  if (!root) return std::nullopt;

  // Newton iteration doubles the p-adic precision each step.
  u64 x = *root;
  unsigned precision = 1;
  while (precision < pp.n()) {
    u64 residual = sub_mod(mul_mod(x, x, q), a, q);
    u64 step = mul_mod(residual, mod_inverse(static_cast<i64>(add_mod(x, x, q)), q), q);
    x = sub_mod(x, step, q);
    precision *= 2;
  }
  return std::min(x, q - x);
}

SquareRootSet square_roots(u64 a, const PrimePowerModulus& pp) {
  const u64 p = pp.p();
  const unsigned n = pp.n();
  a %= pp.q();
  if (a == 0) return {pp.power((n + 1) / 2), {0}};

  unsigned v = 0;
  u64 unit = a;
  while (unit % p == 0) {
    unit /= p;
    ++v;
  }
  if (v % 2 == 1) return {pp.q(), {}};

  const unsigned k = v / 2;
  const PrimePowerModulus inner(p, n - v);
  auto y = sqrt_mod_prime_power(static_cast<i64>(unit % inner.q()), inner);
  if (!y) return {pp.q(), {}};

  const u64 step = pp.power(n - k);
  std::vector<u64> residues{pp.power(k) * *y, pp.power(k) * (inner.q() - *y)};
  std::sort(residues.begin(), residues.end());
  return {step, residues};
}

ComplexValue unit_phase(u64 v, u64 q) {
  v %= q;
  // Centering keeps the angle argument small for better accuracy.
  double centered = v > q / 2 ? -static_cast<double>(q - v) : static_cast<double>(v);
  return std::polar(1.0, 2.0 * std::numbers::pi * centered / static_cast<double>(q));
}

ComplexValue gauss_sum(u64 q) {
  if (q == 0 || q % 2 == 0) throw DomainError("gauss_sum: q must be odd and positive");
  KahanSum acc;
  for (u64 x = 1; x <= q; ++x) acc.add(unit_phase(mul_mod(x % q, x % q, q), q));
  return acc.value();
}

ComplexValue gauss_sum_character(u64 q) {
  if (q == 0 || q % 2 == 0) throw DomainError("gauss_sum_character: q must be odd and positive");
  KahanSum acc;
  for (u64 y = 1; y <= q; ++y) {
    int chi = jacobi(static_cast<i64>(y), static_cast<i64>(q));
    if (chi != 0) acc.add(static_cast<double>(chi) * unit_phase(y, q));
  }
  return acc.value();
}

namespace {

void require_units_mod_p(const CoefficientTriple& coeffs, u64 p) {
  for (u64 v : coeffs.values()) {
    if (v % p == 0) {
      throw DomainError("coefficient " + std::to_string(v) + " is not a unit modulo " + std::to_string(p));
    }
  }
}

int minus_product_symbol(u64 x, u64 y, u64 p) {
  u64 prod = mul_mod(x % p, y % p, p);
  return jacobi(static_cast<i64>(p - prod), static_cast<i64>(p));
}

}  // namespace

int s_p(const CoefficientTriple& coeffs, u64 p) {
  require_units_mod_p(coeffs, p);
  return 2 + minus_product_symbol(coeffs[0], coeffs[1], p) + minus_product_symbol(coeffs[0], coeffs[2], p) +
         minus_product_symbol(coeffs[1], coeffs[2], p);
}

Rational main_constant(const CoefficientTriple& coeffs, u64 p) {
  if (p >= (u64{1} << 31)) throw DomainError("main_constant: p too large for an exact 64-bit rational");
  const i64 pi = static_cast<i64>(p);
  return Rational::make((pi - s_p(coeffs, p)) * (pi - 1), pi * pi);
}

}  // namespace conic_lab
