#pragma once

// Dense integer polynomials with arbitrary-size coefficients. Arithmetic is
// exact; reduction modulo q happens only at evaluation time.

#include <gmpxx.h>

#include <initializer_list>
#include <string>
#include <vector>

#include "conic_lab/modcore.hpp"

namespace conic_lab {

class Polynomial {
 public:
  Polynomial() = default;
  // Coefficients in increasing degree.
  Polynomial(std::initializer_list<i64> coeffs);
  explicit Polynomial(std::vector<mpz_class> coeffs);

  static Polynomial constant(const mpz_class& c);
  static Polynomial monomial(const mpz_class& c, unsigned degree);

  bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<mpz_class>& coefficients() const { return c_; }
  mpz_class coefficient(unsigned k) const;

  Polynomial derivative() const;
  // Largest k with p^k dividing every coefficient. Undefined for zero.
  unsigned content_ord(u64 p) const;
  // Exact division of every coefficient by p^k.
  Polynomial divided_by_power(u64 p, unsigned k) const;

  u64 eval_mod(u64 t, u64 m) const;
  // Coefficients of P(alpha + u) mod m, as a polynomial in u.
  std::vector<u64> taylor_shift_mod(u64 alpha, u64 m) const;

  std::string to_string() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const mpz_class& k, const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<mpz_class> c_;
};

// Order of p in a nonzero integer.
unsigned ord_p(mpz_class v, u64 p);
u64 mpz_mod(const mpz_class& v, u64 m);

}  // namespace conic_lab
