#include "conic_lab/polynomial.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace conic_lab {

namespace {

mpz_class from_u64(u64 v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

}  // namespace

u64 mpz_mod(const mpz_class& v, u64 m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), from_u64(m).get_mpz_t());
  u64 out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, r.get_mpz_t());
  return out;
}

unsigned ord_p(mpz_class v, u64 p) {
  if (v == 0) throw std::invalid_argument("ord_p of zero");
  const mpz_class pz = from_u64(p);
  unsigned k = 0;
  while (mpz_divisible_p(v.get_mpz_t(), pz.get_mpz_t())) {
    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t());
    ++k;
  }
  return k;
}

Polynomial::Polynomial(std::initializer_list<i64> coeffs) {
  for (i64 v : coeffs) c_.emplace_back(static_cast<long>(v));
  trim();
}

Polynomial::Polynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(const mpz_class& c) { return Polynomial(std::vector<mpz_class>{c}); }

Polynomial Polynomial::monomial(const mpz_class& c, unsigned degree) {
  std::vector<mpz_class> v(degree + 1);
  v[degree] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpz_class Polynomial::coefficient(unsigned k) const { return k < c_.size() ? c_[k] : mpz_class(0); }

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpz_class> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<unsigned long>(k);
  return Polynomial(std::move(d));
}

unsigned Polynomial::content_ord(u64 p) const {
  if (is_zero()) throw std::invalid_argument("content_ord of the zero polynomial");
  unsigned best = std::numeric_limits<unsigned>::max();
  for (const auto& v : c_) {
    if (v != 0) best = std::min(best, ord_p(v, p));
  }
  return best;
}

Polynomial Polynomial::divided_by_power(u64 p, unsigned k) const {
  mpz_class d;
  mpz_pow_ui(d.get_mpz_t(), from_u64(p).get_mpz_t(), k);
  std::vector<mpz_class> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!mpz_divisible_p(c_[i].get_mpz_t(), d.get_mpz_t())) throw std::invalid_argument("inexact division");
    mpz_divexact(out[i].get_mpz_t(), c_[i].get_mpz_t(), d.get_mpz_t());
  }
  return Polynomial(std::move(out));
}

u64 Polynomial::eval_mod(u64 t, u64 m) const {
  t %= m;
  u64 acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = add_mod(mul_mod(acc, t, m), mpz_mod(*it, m), m);
  return acc;
}

std::vector<u64> Polynomial::taylor_shift_mod(u64 alpha, u64 m) const {
  std::vector<u64> a(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) a[i] = mpz_mod(c_[i], m);
  alpha %= m;
  // Repeated synthetic division by (u - alpha).
  const std::size_t d = a.size();
  for (std::size_t i = 0; i + 1 < d; ++i) {
    for (std::size_t j = d - 1; j > i; --j) a[j - 1] = add_mod(a[j - 1], mul_mod(alpha, a[j], m), m);
  }
  return a;
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (c_[k] == 0) continue;
    if (!out.empty()) out += " + ";
    out += c_[k].get_str();
    if (k >= 1) out += "*t";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<mpz_class> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coefficient(i) + b.coefficient(i);
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<mpz_class> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coefficient(i) - b.coefficient(i);
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(const mpz_class& k, const Polynomial& a) { return Polynomial::constant(k) * a; }

}  // namespace conic_lab
