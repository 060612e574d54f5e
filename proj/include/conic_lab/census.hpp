#pragma once

// Counting unit-coordinate solutions of alpha_1 x1^2 + alpha_2 x2^2 +
// alpha_3 x3^2 = 0 (mod q) in boxes, sharp or Gaussian-weighted, together with
// the main-term prediction Phi^(0)^3 C_p N^3 / q and a few exact counts used
// to check it.

#include <array>
#include <optional>
#include <vector>

#include "conic_lab/modcore.hpp"
#include "conic_lab/parallel.hpp"

namespace conic_lab {

enum class WeightKind { Gaussian, Sharp };

const char* to_string(WeightKind kind);

struct WeightSpec {
  WeightKind kind = WeightKind::Gaussian;
  // Gaussian sums stop at |x| <= truncation_radius * N. Must be >= 6.
  double truncation_radius = 6.0;

  // Phi(x): exp(-pi x^2), or the indicator of [-1, 1].
  double value(double x) const;
  // Phi^(0): 1 for the self-dual Gaussian, 2 for the indicator.
  double fourier_at_zero() const { return kind == WeightKind::Gaussian ? 1.0 : 2.0; }
  void validate() const;
};

struct Prediction {
  double value = 0;
  bool vacuous = false;  // C_p <= 0, i.e. p <= s_p
};

struct CountReport {
  u64 p = 0;
  unsigned n = 0;
  u64 q = 0;
  std::array<i64, 3> coeffs{};
  double N = 0;
  std::optional<double> theta;
  WeightKind weight = WeightKind::Gaussian;
  double observed = 0;
  std::optional<i64> observed_exact;  // sharp counts only
  double predicted = 0;
  bool vacuous = false;
  std::optional<double> ratio;  // observed / predicted when predicted > 0
};

// Exact number of (x1, x2, x3) with |x_i| <= N, p not dividing x1 x2 x3, on the congruence.
i64 count_sharp(const CoefficientTriple& coeffs, const PrimePowerModulus& pp, i64 N, const ParallelPlan& plan = {});

// sum Phi(x1/N) Phi(x2/N) Phi(x3/N) over the same solution set, |x_i| <= radius * N.
// The sharp kind delegates to count_sharp(floor(N)).
double count_smoothed(const CoefficientTriple& coeffs, const PrimePowerModulus& pp, double N, const WeightSpec& w,
                      const ParallelPlan& plan = {});

Prediction predict_main_term(const CoefficientTriple& coeffs, const PrimePowerModulus& pp, double N,
                             const WeightSpec& w);

// Exhaustive count of unit solutions modulo the prime p (p <= 10^4).
i64 count_mod_p(const CoefficientTriple& coeffs, u64 p);

// Number of (x1, x2) mod q with g1 x1^2 + g2 x2^2 = 1 (mod q).
u64 count_unit_circle(u64 g1, u64 g2, const PrimePowerModulus& pp);

struct SmallestSolution {
  i64 m = 0;
  std::array<i64, 3> witness{};  // positive coordinates, lexicographically least at norm m
};

// Least max-norm of a unit solution, or nullopt when none exists. Shell m
// costs about 3m candidate visits; BudgetExceeded once `budget` is spent.
std::optional<SmallestSolution> smallest_solution(const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                                                  u64 budget = ~u64{0});

// Number of (x1, x2) pair visits a box sweep of half-width `half_width` costs.
u64 pair_visits(const PrimePowerModulus& pp, i64 half_width);
// Half-width actually swept for box parameter N under weight w.
i64 sweep_half_width(double N, const WeightSpec& w);

struct ScanOptions {
  double theta = 0.62;
  WeightSpec weight;
  u64 budget = 1'000'000'000;
  ParallelPlan plan;
};

// For each n in [n_lo, n_hi]: N = ceil(q^theta), observed smoothed count,
// predicted main term, ratio. Throws BudgetExceeded before doing any work if
// a step would exceed the budget.
std::vector<CountReport> asymptotic_scan(const std::array<i64, 3>& coeffs, u64 p, unsigned n_lo, unsigned n_hi,
                                         const ScanOptions& options);

// Total pair visits asymptotic_scan would perform.
u64 scan_cost(u64 p, unsigned n_lo, unsigned n_hi, const ScanOptions& options);

// |sum_m Phi(m/scale) - scale * sum_m Phi^(scale m)| for the Gaussian.
double poisson_selfcheck(const WeightSpec& w, double scale);

}  // namespace conic_lab
