#pragma once

// Elementary Diophantine tools: representation counts for A X^2 + B Y^2 = C in
// a box, divisor counts, Dirichlet approximants from continued fractions, the
// congruence-pair count F and the small-coefficient reduction of a ternary
// congruence.

#include <vector>

#include "conic_lab/modcore.hpp"

namespace conic_lab {

struct BinaryQuadraticInstance {
  i64 A = 1;
  i64 B = 1;
  i64 C = 1;
  i64 x = 1;  // box half-width
};

// #{(X, Y) : |X|, |Y| <= x, A X^2 + B Y^2 = C}.
i64 count_equation_solutions(const BinaryQuadraticInstance& inst);

u64 divisor_count(u64 k);

struct Approximant {
  i64 a = 0;
  i64 r = 1;
  i64 Q = 1;
  u64 target_num = 0;
  u64 target_den = 1;

  // |target_num/target_den - a/r| <= 1/(rQ), checked in exact arithmetic.
  bool satisfies_bound() const;
};

// Last continued-fraction convergent a/r of beta/q with r <= Q.
Approximant dirichlet_approx(u64 beta, u64 q, i64 Q);

// #{(A1, A2) : 0 < |A1|, |A2| <= X, b1 A1 = b2 A2 (mod q)}. b1 must be invertible mod q.
i64 count_F(u64 b1, u64 b2, i64 X, u64 q);

struct ReducedCoefficients {
  i64 g1 = 0;
  i64 g2 = 0;
  Approximant first;   // for b1/b3 mod q
  Approximant second;  // for b2/b3 mod q
  i64 r = 1;           // r1 r2
  // r x3^2 = g1 x1^2 + g2 x2^2 (mod q) has the same unit solutions as the
  // original congruence exactly when p does not divide r.
  bool equivalent = false;
};

// g1 = -c1 r + a1 r2 q and g2 = -c2 r + a2 r1 q with c_i = b_i / b3 mod q in [0, q).
// Then |g1| <= q r2 / Q and |g2| <= q r1 / Q.
ReducedCoefficients reduce_coefficients(u64 b1, u64 b2, u64 b3, const PrimePowerModulus& pp, i64 Q);

struct ParameterChoice {
  u64 R = 1;
  u64 Q = 1;
};

// R = ceil(q^(2/5) M^(-3/5)), Q = ceil(q^(3/5) M^(3/5)) in exact integer arithmetic.
ParameterChoice choose_parameters(u64 q, u64 M);

struct ScaleParameters {
  double L_r = 0;  // p^-r q^(1 + eps) / N
  double q_r = 0;  // p^(-r-1) q
};

ScaleParameters scale_parameters(const PrimePowerModulus& pp, unsigned r, double N, double eps = 0.0);

}  // namespace conic_lab
