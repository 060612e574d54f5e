#pragma once

// Parametrized solution sets of alpha_1 y_1^2 + alpha_2 y_2^2 + alpha_3 = 0
// (mod p^n): the chord construction through (0, b) when -alpha_2 alpha_3 is a
// square mod p (Case I), the layered family M_0, ..., M_n when no -alpha_i
// alpha_j is a square (Case II), and digit-by-digit lifting of full triples.

#include <array>
#include <compare>
#include <cstddef>
#include <vector>

#include "conic_lab/modcore.hpp"

namespace conic_lab {

struct BasePoint {
  u64 a = 0;
  u64 b = 0;
  friend bool operator==(const BasePoint&, const BasePoint&) = default;
};

struct SolutionPair {
  u64 y1 = 0;
  u64 y2 = 0;
  friend auto operator<=>(const SolutionPair&, const SolutionPair&) = default;
};

using Triple = std::array<u64, 3>;

enum class ParamCase { CaseI, CaseII };

const char* to_string(ParamCase c);

// Case I when some -alpha_i alpha_j is a quadratic residue mod p, else Case II.
ParamCase classify(const CoefficientTriple& coeffs, u64 p);

struct ParamFamily {
  ParamCase case_tag = ParamCase::CaseI;
  BasePoint base;
  // Case I: coordinate order used for the chord construction; entry i is the
  // original index placed in slot i. Identity for Case II.
  std::array<int, 3> permutation{0, 1, 2};
  // Case I: admissible parameters t mod q, aligned with layers[0].
  std::vector<u64> parameters;
  // Case I: one layer, the image of `parameters`, in original coordinates.
  // Case II: M_0, ..., M_n.
  std::vector<std::vector<SolutionPair>> layers;

  std::size_t size() const;
  std::vector<SolutionPair> sorted_pairs() const;
};

// A point (a, b) with alpha_1 a^2 + alpha_2 b^2 = -alpha_3 (mod q).
// If -alpha_3/alpha_2 is a square this is (0, b) with b the smaller root.
// Otherwise the solution mod p of least centred max-norm (both coordinates
// units preferred, ties broken by centred lexicographic order) is lifted one
// p-adic digit at a time, keeping the least-norm lift at each step.
BasePoint find_base_point(const CoefficientTriple& coeffs, const PrimePowerModulus& pp);

// Chord parametrization through (0, -b):
//   y1 = -2 b a2 t / (a1 + a2 t^2),  y2 = -b (a1 - a2 t^2) / (a1 + a2 t^2).
// Requires b^2 = -a3/a2 mod q and t (a1 - a2 t^2)(a1 + a2 t^2) a unit.
SolutionPair param_case1(u64 t, u64 b, const CoefficientTriple& coeffs, const PrimePowerModulus& pp);

// Every unit solution pair, via Case I after permuting coordinates so that
// -alpha_2 alpha_3 is a residue. Throws if the coefficients are Case II.
ParamFamily build_case1_family(const CoefficientTriple& coeffs, const PrimePowerModulus& pp);

// Layers M_s evaluated at t / p^s with denominators cleared. Throws if the
// residue pattern is not Case II, if q > 10^7, or if two parameters collide.
ParamFamily build_case2_family(const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                               const BasePoint& base);

// Point of the Case II layer s at parameter t, computed as
//   y1 = (a a1 p^2s + 2 a2 b p^s t - a a2 t^2) / (a1 p^2s + a2 t^2)
//   y2 = (b a1 p^2s - 2 a1 a p^s t - b a2 t^2) / (a1 p^2s + a2 t^2).
SolutionPair case2_point(unsigned s, u64 t, const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                         const BasePoint& base);

// The p^2 lifts of a unit solution mod p^n to solutions mod p^(n+1).
std::vector<Triple> lift_triple(const Triple& x, const CoefficientTriple& coeffs, const PrimePowerModulus& pp);

// Exhaustive solution set of alpha_1 y1^2 + alpha_2 y2^2 + alpha_3 = 0 mod q,
// sorted. With units_only, pairs with p | y1 y2 are dropped.
std::vector<SolutionPair> enumerate_pair_solutions(const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                                                   bool units_only);

}  // namespace conic_lab
