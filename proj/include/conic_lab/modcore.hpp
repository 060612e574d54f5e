#pragma once

// Exact arithmetic modulo odd prime powers q = p^n (q <= 2^62), quadratic
// symbols, square roots with Hensel lifting, quadratic Gauss sums and the
// density constants s_p and C_p of a diagonal ternary form.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace conic_lab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

using ComplexValue = std::complex<double>;

inline constexpr u64 kMaxModulus = u64{1} << 62;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}
inline u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;  // a, b < m <= 2^62, no overflow
  return s >= m ? s - m : s;
}
inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

u64 pow_mod(u64 base, u64 exp, u64 m);

// Reduces any signed value into [0, m).
u64 reduce_mod(i64 v, u64 m);
u64 reduce_mod(i128 v, u64 m);

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(u64 n);

// Jacobi symbol (a/m) for odd m >= 1. Throws DomainError otherwise.
int jacobi(i64 a, i64 m);

// Unique b in [1, q) with a*b = 1 mod q (b = 0 when q = 1). Throws
// DomainError when gcd(a, q) > 1.
u64 mod_inverse(i64 a, u64 q);

class PrimePowerModulus {
 public:
  PrimePowerModulus(u64 p, unsigned n);

  u64 p() const { return p_; }
  unsigned n() const { return n_; }
  u64 q() const { return q_; }

  // p^k for 0 <= k <= n.
  u64 power(unsigned k) const { return powers_.at(k); }
  bool is_unit(u64 x) const { return x % p_ != 0; }
  u64 reduce(i64 v) const { return reduce_mod(v, q_); }

  // The same prime one level deeper, p^(n+1).
  PrimePowerModulus lifted() const { return PrimePowerModulus(p_, n_ + 1); }

  friend bool operator==(const PrimePowerModulus& a, const PrimePowerModulus& b) {
    return a.p_ == b.p_ && a.n_ == b.n_;
  }

 private:
  u64 p_;
  unsigned n_;
  u64 q_;
  std::vector<u64> powers_;
};

// (alpha_1, alpha_2, alpha_3) reduced into [0, q), each coprime to p.
class CoefficientTriple {
 public:
  CoefficientTriple(i64 a1, i64 a2, i64 a3, const PrimePowerModulus& pp);
  CoefficientTriple(const std::array<i64, 3>& a, const PrimePowerModulus& pp)
      : CoefficientTriple(a[0], a[1], a[2], pp) {}

  u64 operator[](std::size_t i) const { return a_[i]; }
  const std::array<u64, 3>& values() const { return a_; }
  // The integers the triple was built from. Lifting to a deeper modulus and
  // the exponential-sum amplitudes use these rather than the residues.
  const std::array<i64, 3>& integers() const { return raw_; }
  u64 modulus() const { return q_; }

  // The same integers reduced for another modulus.
  CoefficientTriple reduced(const PrimePowerModulus& pp) const { return CoefficientTriple(raw_, pp); }

 private:
  std::array<i64, 3> raw_;
  std::array<u64, 3> a_;
  u64 q_;
};

// Exact non-negative-denominator rational in lowest terms.
struct Rational {
  i64 num = 0;
  i64 den = 1;

  static Rational make(i64 num, i64 den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Smaller root x in [0, q) of x^2 = a mod q for a unit a, or nullopt when a is
// a non-residue mod p. Throws DomainError when p | a.
std::optional<u64> sqrt_mod_prime_power(i64 a, const PrimePowerModulus& pp);

// All roots of x^2 = a (mod q) for arbitrary a, described as the residues
// x = r (mod step) for r in `residues`. `step` divides q.
struct SquareRootSet {
  u64 step = 1;
  std::vector<u64> residues;

  // Number of roots in [0, q).
  u64 count(u64 q) const { return residues.size() * (q / step); }
};
SquareRootSet square_roots(u64 a, const PrimePowerModulus& pp);

// Tonelli-Shanks modulo an odd prime; a in [0, p).
std::optional<u64> sqrt_mod_prime(u64 a, u64 p);

// e_q(v) = exp(2 pi i v / q).
ComplexValue unit_phase(u64 v, u64 q);

// G_q = sum_{x=1}^{q} e_q(x^2), summed directly with compensated accumulation.
ComplexValue gauss_sum(u64 q);
// Character form sum_{y=1}^{q} (y/q) e_q(y); equals G_q for squarefree odd q.
ComplexValue gauss_sum_character(u64 q);

// 2 + (-a1 a2/p) + (-a1 a3/p) + (-a2 a3/p).
int s_p(const CoefficientTriple& coeffs, u64 p);

// C_p = (p - s_p)(p - 1)/p^2. Zero or negative when p <= s_p.
Rational main_constant(const CoefficientTriple& coeffs, u64 p);

// Compensated (Kahan) accumulator for complex sums.
class KahanSum {
 public:
  void add(ComplexValue v) {
    add_part(v.real(), sum_re_, c_re_);
    add_part(v.imag(), sum_im_, c_im_);
  }
  ComplexValue value() const { return {sum_re_, sum_im_}; }

 private:
  static void add_part(double v, double& sum, double& c) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double sum_re_ = 0, c_re_ = 0, sum_im_ = 0, c_im_ = 0;
};

}  // namespace conic_lab
