#include "conic_lab/conic.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>

#include "conic_lab/errors.hpp"

namespace conic_lab {

namespace {

bool is_residue(u64 x, u64 p) { return jacobi(static_cast<i64>(x % p), static_cast<i64>(p)) == 1; }

// -x*y mod p is a nonzero square.
bool minus_product_is_residue(u64 x, u64 y, u64 p) {
  return is_residue(p - mul_mod(x % p, y % p, p), p);
}

bool solves_pair(const CoefficientTriple& c, u64 y1, u64 y2, u64 q) {
  u64 v = add_mod(mul_mod(c[0], mul_mod(y1, y1, q), q), mul_mod(c[1], mul_mod(y2, y2, q), q), q);
  return add_mod(v, c[2], q) == 0;
}

i64 centred(u64 v, u64 m) { return v <= m / 2 ? static_cast<i64>(v) : static_cast<i64>(v) - static_cast<i64>(m); }

constexpr u64 kMaxMaterializedModulus = 10'000'000;

}  // namespace

const char* to_string(ParamCase c) { return c == ParamCase::CaseI ? "I" : "II"; }

ParamCase classify(const CoefficientTriple& coeffs, u64 p) {
  if (minus_product_is_residue(coeffs[1], coeffs[2], p) || minus_product_is_residue(coeffs[0], coeffs[2], p) ||
      minus_product_is_residue(coeffs[0], coeffs[1], p)) {
    return ParamCase::CaseI;
  }
  return ParamCase::CaseII;
}

std::size_t ParamFamily::size() const {
  std::size_t total = 0;
  for (const auto& layer : layers) total += layer.size();
  return total;
}

std::vector<SolutionPair> ParamFamily::sorted_pairs() const {
  std::vector<SolutionPair> out;
  out.reserve(size());
  for (const auto& layer : layers) out.insert(out.end(), layer.begin(), layer.end());
  std::sort(out.begin(), out.end());
  return out;
}

BasePoint find_base_point(const CoefficientTriple& coeffs, const PrimePowerModulus& pp) {
  const u64 p = pp.p();
  const u64 q = pp.q();
  const u64 inv_a2 = mod_inverse(static_cast<i64>(coeffs[1]), q);
  const u64 target = mul_mod(q - coeffs[2], inv_a2, q);  // b^2 when a = 0
  if (is_residue(target, p)) return {0, *sqrt_mod_prime_power(static_cast<i64>(target), pp)};

  // Search mod p. Key: (not both units, centred max-norm, centred a, centred b).
  using Key = std::tuple<bool, i64, i64, i64>;
  std::optional<Key> best;
  BasePoint found;
  const u64 a1p = coeffs[0] % p, a3p = coeffs[2] % p, inv_a2p = inv_a2 % p;
  for (u64 a = 0; a < p; ++a) {
    u64 rhs = mul_mod(sub_mod(p - a3p, mul_mod(a1p, mul_mod(a, a, p), p), p), inv_a2p, p);
    auto root = sqrt_mod_prime(rhs, p);
    if (!root) continue;
    for (u64 b : {*root, (p - *root) % p}) {
      i64 ca = centred(a, p), cb = centred(b, p);
      Key key{!(a != 0 && b != 0), std::max(std::abs(ca), std::abs(cb)), ca, cb};
      if (!best || key < *best) {
        best = key;
        found = {a, b};
      }
    }
  }
  if (!best) throw std::logic_error("find_base_point: no solution modulo p");

  // Newton lift on a unit coordinate, keeping the other fixed.
  const bool lift_b = found.b % p != 0;
  for (unsigned precision = 1; precision < pp.n(); precision *= 2) {
    u64 value = add_mod(add_mod(mul_mod(coeffs[0], mul_mod(found.a, found.a, q), q),
                                mul_mod(coeffs[1], mul_mod(found.b, found.b, q), q), q),
                        coeffs[2], q);
    if (lift_b) {
      u64 slope = mul_mod(2 % q, mul_mod(coeffs[1], found.b, q), q);
      found.b = sub_mod(found.b, mul_mod(value, mod_inverse(static_cast<i64>(slope), q), q), q);
    } else {
      u64 slope = mul_mod(2 % q, mul_mod(coeffs[0], found.a, q), q);
      found.a = sub_mod(found.a, mul_mod(value, mod_inverse(static_cast<i64>(slope), q), q), q);
    }
  }
  if (!solves_pair(coeffs, found.a, found.b, q)) throw std::logic_error("find_base_point: lift failed");
  return found;
}

SolutionPair param_case1(u64 t, u64 b, const CoefficientTriple& coeffs, const PrimePowerModulus& pp) {
  const u64 q = pp.q();
  const u64 p = pp.p();
  t %= q;
  b %= q;
  if (add_mod(mul_mod(coeffs[1], mul_mod(b, b, q), q), coeffs[2], q) != 0) {
    throw DomainError("param_case1: b^2 != -alpha_3/alpha_2 mod q");
  }
  const u64 t2 = mul_mod(t, t, q);
  const u64 minus = sub_mod(coeffs[0], mul_mod(coeffs[1], t2, q), q);
  const u64 plus = add_mod(coeffs[0], mul_mod(coeffs[1], t2, q), q);
  if (t % p == 0 || minus % p == 0 || plus % p == 0) {
    throw DomainError("param_case1: t(alpha_1 - alpha_2 t^2)(alpha_1 + alpha_2 t^2) must be a unit");
  }
  const u64 inv = mod_inverse(static_cast<i64>(plus), q);
  const u64 y1 = sub_mod(0, mul_mod(mul_mod(mul_mod(2 % q, b, q), mul_mod(coeffs[1], t, q), q), inv, q), q);
  const u64 y2 = sub_mod(0, mul_mod(mul_mod(b, minus, q), inv, q), q);
  return {y1, y2};
}

ParamFamily build_case1_family(const CoefficientTriple& coeffs, const PrimePowerModulus& pp) {
  const u64 p = pp.p();
  const u64 q = pp.q();
  if (q > kMaxMaterializedModulus) throw BudgetExceeded("build_case1_family: q exceeds 10^7");

  ParamFamily family;
  family.case_tag = ParamCase::CaseI;
  if (minus_product_is_residue(coeffs[1], coeffs[2], p)) {
    family.permutation = {0, 1, 2};
  } else if (minus_product_is_residue(coeffs[0], coeffs[2], p)) {
    family.permutation = {1, 0, 2};
  } else if (minus_product_is_residue(coeffs[0], coeffs[1], p)) {
    family.permutation = {2, 1, 0};
  } else {
    throw DomainError("build_case1_family: no -alpha_i alpha_j is a residue (Case II pattern)");
  }
  const auto& raw = coeffs.integers();
  const auto& perm = family.permutation;
  const CoefficientTriple permuted(raw[perm[0]], raw[perm[1]], raw[perm[2]], pp);

  const u64 b = *sqrt_mod_prime_power(
      static_cast<i64>(mul_mod(q - permuted[2], mod_inverse(static_cast<i64>(permuted[1]), q), q)), pp);
  family.base = {0, b};

  std::vector<SolutionPair> image;
  for (u64 t = 1; t < q; ++t) {
    if (t % p == 0) continue;
    const u64 t2 = mul_mod(t % p, t % p, p);
    const u64 at2 = mul_mod(permuted[1] % p, t2, p);
    const u64 a1 = permuted[0] % p;
    if (a1 == at2 || add_mod(a1, at2, p) == 0) continue;

    const SolutionPair z = param_case1(t, b, permuted, pp);
    Triple slot{z.y1, z.y2, 1};
    Triple original{};
    for (int i = 0; i < 3; ++i) original[perm[i]] = slot[i];
    const u64 inv_x3 = mod_inverse(static_cast<i64>(original[2]), q);
    family.parameters.push_back(t);
    image.push_back({mul_mod(original[0], inv_x3, q), mul_mod(original[1], inv_x3, q)});
  }
  family.layers.push_back(std::move(image));
  return family;
}

SolutionPair case2_point(unsigned s, u64 t, const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                         const BasePoint& base) {
  const u64 q = pp.q();
  const unsigned n = pp.n();
  const u64 ps = s >= n ? 0 : pp.power(s);
  const u64 p2s = 2 * s >= n ? 0 : pp.power(2 * s);
  const u64 a1 = coeffs[0], a2 = coeffs[1];
  const u64 a = base.a, b = base.b;
  t %= q;
  const u64 t2 = mul_mod(t, t, q);
  const u64 den = add_mod(mul_mod(a1, p2s, q), mul_mod(a2, t2, q), q);
  const u64 inv = mod_inverse(static_cast<i64>(den), q);
  const u64 cross = mul_mod(ps, t, q);  // p^s t
  u64 n1 = mul_mod(mul_mod(a, a1, q), p2s, q);
  n1 = add_mod(n1, mul_mod(mul_mod(2 % q, mul_mod(a2, b, q), q), cross, q), q);
  n1 = sub_mod(n1, mul_mod(mul_mod(a, a2, q), t2, q), q);
  u64 n2 = mul_mod(mul_mod(b, a1, q), p2s, q);
  n2 = sub_mod(n2, mul_mod(mul_mod(2 % q, mul_mod(a1, a, q), q), cross, q), q);
  n2 = sub_mod(n2, mul_mod(mul_mod(b, a2, q), t2, q), q);
  return {mul_mod(n1, inv, q), mul_mod(n2, inv, q)};
}

ParamFamily build_case2_family(const CoefficientTriple& coeffs, const PrimePowerModulus& pp, const BasePoint& base) {
  const u64 p = pp.p();
  const u64 q = pp.q();
  const unsigned n = pp.n();
  if (classify(coeffs, p) != ParamCase::CaseII) {
    throw DomainError("build_case2_family: some -alpha_i alpha_j is a residue (not Case II)");
  }
  if (!solves_pair(coeffs, base.a, base.b, q)) throw DomainError("build_case2_family: invalid base point");
  if (q > kMaxMaterializedModulus) throw BudgetExceeded("build_case2_family: q exceeds 10^7");

  ParamFamily family;
  family.case_tag = ParamCase::CaseII;
  family.base = base;
  family.layers.resize(n + 1);

  std::unordered_set<u64> seen;
  seen.reserve(static_cast<std::size_t>(q + q / p));
  auto add = [&](unsigned s, u64 t) {
    SolutionPair pt = case2_point(s, t, coeffs, pp, base);
    if (!solves_pair(coeffs, pt.y1, pt.y2, q)) throw std::logic_error("case II point off the conic");
    if (!seen.insert(pt.y1 * q + pt.y2).second) {
      throw std::logic_error("case II parametrization produced a repeated pair at layer " + std::to_string(s));
    }
    family.layers[s].push_back(pt);
  };
  for (u64 t = 1; t <= q; ++t) add(0, t);
  for (unsigned s = 1; s < n; ++s) {
    const u64 limit = pp.power(n - s);
    for (u64 t = 1; t <= limit; ++t) {
      if (t % p != 0) add(s, t);
    }
  }
  add(n, 1);
  return family;
}

std::vector<Triple> lift_triple(const Triple& x, const CoefficientTriple& coeffs, const PrimePowerModulus& pp) {
  const u64 p = pp.p();
  const u64 q = pp.q();
  const PrimePowerModulus deeper = pp.lifted();
  const u64 big = deeper.q();
  const CoefficientTriple alpha = coeffs.reduced(deeper);

  Triple base{};
  u64 value = 0;
  for (int i = 0; i < 3; ++i) {
    if (x[i] % p == 0) throw DomainError("lift_triple: coordinate " + std::to_string(i + 1) + " is not a unit");
    base[i] = x[i] % q;
    value = add_mod(value, mul_mod(alpha[i], mul_mod(base[i], base[i], big), big), big);
  }
  if (value % q != 0) throw DomainError("lift_triple: point does not solve the congruence mod q");

  // c + sum 2 alpha_i x_i k_i = 0 (mod p), solved for k_3.
  const u64 c = value / q;
  std::array<u64, 3> slope{};
  for (int i = 0; i < 3; ++i) slope[i] = mul_mod(2, mul_mod(alpha[i] % p, base[i] % p, p), p);
  const u64 inv_slope3 = mod_inverse(static_cast<i64>(slope[2]), p);

  std::vector<Triple> lifts;
  lifts.reserve(static_cast<std::size_t>(p * p));
  for (u64 k1 = 0; k1 < p; ++k1) {
    for (u64 k2 = 0; k2 < p; ++k2) {
      u64 partial = add_mod(c, add_mod(mul_mod(slope[0], k1, p), mul_mod(slope[1], k2, p), p), p);
      u64 k3 = mul_mod(sub_mod(0, partial, p), inv_slope3, p);
      lifts.push_back({base[0] + k1 * q, base[1] + k2 * q, base[2] + k3 * q});
    }
  }
  return lifts;
}

std::vector<SolutionPair> enumerate_pair_solutions(const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                                                   bool units_only) {
  const u64 p = pp.p();
  const u64 q = pp.q();
  const u64 inv_a2 = mod_inverse(static_cast<i64>(coeffs[1]), q);
  std::vector<SolutionPair> out;
  for (u64 y1 = 0; y1 < q; ++y1) {
    if (units_only && y1 % p == 0) continue;
    const u64 rhs = mul_mod(sub_mod(q - coeffs[2], mul_mod(coeffs[0], mul_mod(y1, y1, q), q), q), inv_a2, q);
    if (units_only) {
      if (rhs % p == 0) continue;
      auto root = sqrt_mod_prime_power(static_cast<i64>(rhs), pp);
      if (!root) continue;
      out.push_back({y1, *root});
      out.push_back({y1, q - *root});
    } else {
      const SquareRootSet roots = square_roots(rhs, pp);
      for (u64 r : roots.residues) {
        for (u64 y2 = r; y2 < q; y2 += roots.step) out.push_back({y1, y2});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace conic_lab
