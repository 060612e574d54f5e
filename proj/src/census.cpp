#include "conic_lab/census.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conic_lab/errors.hpp"

namespace conic_lab {

namespace {

constexpr u64 kRootTableLimit = u64{1} << 24;

// Smaller square root of a unit residue mod q, tabulated for small q.
class UnitRootFinder {
 public:
  explicit UnitRootFinder(const PrimePowerModulus& pp) : pp_(pp) {
    const u64 q = pp.q();
    if (q > kRootTableLimit) return;
    table_.assign(q, kNone);
    for (u64 x = 1; x <= q / 2; ++x) {
      if (x % pp.p() != 0) table_[mul_mod(x, x, q)] = static_cast<std::uint32_t>(x);
    }
  }

  std::optional<u64> operator()(u64 residue) const {
    if (!table_.empty()) {
      std::uint32_t r = table_[residue];
      if (r == kNone) return std::nullopt;
      return r;
    }
    return sqrt_mod_prime_power(static_cast<i64>(residue), pp_);
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  PrimePowerModulus pp_;
  std::vector<std::uint32_t> table_;
};

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// #{x in [-N, N] : x = r (mod q)}
i64 count_in_progression(u64 r, u64 q, i64 N) {
  const i64 qi = static_cast<i64>(q);
  const i64 ri = static_cast<i64>(r);
  return floor_div(N - ri, qi) - floor_div(-N - 1 - ri, qi);
}

// Values alpha_i * alpha_3^{-1} * x^2 mod q for x in [0, X].
std::vector<u64> scaled_squares(u64 alpha, u64 inv_a3, u64 q, i64 X) {
  std::vector<u64> out(static_cast<std::size_t>(X) + 1);
  const u64 scale = mul_mod(alpha, inv_a3, q);
  for (i64 x = 0; x <= X; ++x) {
    const u64 xr = static_cast<u64>(x) % q;
    out[static_cast<std::size_t>(x)] = mul_mod(scale, mul_mod(xr, xr, q), q);
  }
  return out;
}

// Sweeps x1, x2 in [1, X] (units only) and hands each row's valid x3 roots to
// `per_root`, accumulating one value per x1 row. Sign symmetry in all three
// coordinates is applied by the caller (factor 8).
template <class Value, class PerRoot, class RowWeight>
std::vector<Value> sweep_rows(const CoefficientTriple& coeffs, const PrimePowerModulus& pp, i64 X,
                              const ParallelPlan& plan, PerRoot per_root, RowWeight row_weight) {
  const u64 p = pp.p();
  const u64 q = pp.q();
  const u64 inv_a3 = mod_inverse(static_cast<i64>(coeffs[2]), q);
  const auto s1 = scaled_squares(coeffs[0], inv_a3, q, X);
  const auto s2 = scaled_squares(coeffs[1], inv_a3, q, X);
  const UnitRootFinder roots(pp);

  std::vector<Value> rows(static_cast<std::size_t>(std::max<i64>(X, 0)), Value{});
  for_each_row(rows.size(), plan, [&](std::size_t index) {
    const i64 x1 = static_cast<i64>(index) + 1;
    if (x1 % static_cast<i64>(p) == 0) return;
    Value acc{};
    const u64 a = s1[static_cast<std::size_t>(x1)];
    for (i64 x2 = 1; x2 <= X; ++x2) {
      if (x2 % static_cast<i64>(p) == 0) continue;
      const u64 rhs = sub_mod(0, add_mod(a, s2[static_cast<std::size_t>(x2)], q), q);
      if (rhs % p == 0) continue;  // x3 would not be a unit
      auto r = roots(rhs);
      if (!r) continue;
      acc += row_weight(x2) * per_root(*r);
    }
    rows[index] = row_weight(x1) * acc;
  });
  return rows;
}

}  // namespace

const char* to_string(WeightKind kind) { return kind == WeightKind::Gaussian ? "gaussian" : "sharp"; }

double WeightSpec::value(double x) const {
  if (kind == WeightKind::Sharp) return std::abs(x) <= 1.0 ? 1.0 : 0.0;
  return std::exp(-M_PI * x * x);
}

void WeightSpec::validate() const {
  if (kind == WeightKind::Gaussian && !(truncation_radius >= 6.0)) {
    throw DomainError("gaussian truncation radius must be >= 6");
  }
}

i64 count_sharp(const CoefficientTriple& coeffs, const PrimePowerModulus& pp, i64 N, const ParallelPlan& plan) {
  if (N <= 0) return 0;
  const u64 q = pp.q();
  auto rows = sweep_rows<i64>(
      coeffs, pp, N, plan, [&](u64 r) { return count_in_progression(r, q, N); }, [](i64) { return i64{1}; });
  i64 total = 0;
  for (i64 v : rows) total += v;
  // (+-x1, +-x2) and the two roots +-r of x3.
  return 8 * total;
}

i64 sweep_half_width(double N, const WeightSpec& w) {
  if (w.kind == WeightKind::Sharp) return static_cast<i64>(std::floor(N));
  return static_cast<i64>(std::floor(w.truncation_radius * N));
}

double count_smoothed(const CoefficientTriple& coeffs, const PrimePowerModulus& pp, double N, const WeightSpec& w,
                      const ParallelPlan& plan) {
  w.validate();
  if (w.kind == WeightKind::Sharp) return static_cast<double>(count_sharp(coeffs, pp, sweep_half_width(N, w), plan));
  if (!(N > 0)) return 0.0;

  const i64 R = sweep_half_width(N, w);
  const i64 q = static_cast<i64>(pp.q());
  std::vector<double> weight(static_cast<std::size_t>(R) + 1);
  for (i64 x = 0; x <= R; ++x) weight[static_cast<std::size_t>(x)] = w.value(static_cast<double>(x) / N);

  auto along_progression = [&](u64 r) {
    // sum of Phi(x3/N) over x3 = r (mod q), |x3| <= R
    double s = 0;
    const i64 ri = static_cast<i64>(r);
    for (i64 x3 = ri - q * floor_div(ri + R, q); x3 <= R; x3 += q) s += weight[static_cast<std::size_t>(std::abs(x3))];
    return s;
  };
  auto rows = sweep_rows<double>(coeffs, pp, R, plan, along_progression,
                                 [&](i64 x) { return weight[static_cast<std::size_t>(x)]; });
  double total = 0;
  for (double v : rows) total += v;
  return 8.0 * total;
}

Prediction predict_main_term(const CoefficientTriple& coeffs, const PrimePowerModulus& pp, double N,
                             const WeightSpec& w) {
  const Rational c = main_constant(coeffs, pp.p());
  const double phi0 = w.fourier_at_zero();
  Prediction out;
  out.vacuous = c.num <= 0;
  out.value = phi0 * phi0 * phi0 * c.to_double() * N * N * N / static_cast<double>(pp.q());
  return out;
}

i64 count_mod_p(const CoefficientTriple& coeffs, u64 p) {
  if (p > 10'000) throw BudgetExceeded("count_mod_p: exhaustive scan limited to p <= 10^4");
  const PrimePowerModulus prime(p, 1);
  const CoefficientTriple c = coeffs.reduced(prime);
  // hits[v] = #{x3 unit : alpha_3 x3^2 = v}
  std::vector<i64> hits(p, 0);
  for (u64 x = 1; x < p; ++x) ++hits[mul_mod(c[2], mul_mod(x, x, p), p)];
  i64 total = 0;
  for (u64 x1 = 1; x1 < p; ++x1) {
    const u64 t1 = mul_mod(c[0], mul_mod(x1, x1, p), p);
    for (u64 x2 = 1; x2 < p; ++x2) {
      const u64 t = add_mod(t1, mul_mod(c[1], mul_mod(x2, x2, p), p), p);
      total += hits[sub_mod(0, t, p)];
    }
  }
  return total;
}

u64 count_unit_circle(u64 g1, u64 g2, const PrimePowerModulus& pp) {
  const u64 q = pp.q();
  g1 %= q;
  g2 %= q;
  if (!pp.is_unit(g1) || !pp.is_unit(g2)) throw DomainError("count_unit_circle: gamma_1 gamma_2 must be a unit");
  const u64 inv_g2 = mod_inverse(static_cast<i64>(g2), q);
  u64 total = 0;
  for (u64 x1 = 0; x1 < q; ++x1) {
    const u64 rhs = mul_mod(sub_mod(1 % q, mul_mod(g1, mul_mod(x1, x1, q), q), q), inv_g2, q);
    total += square_roots(rhs, pp).count(q);
  }
  return total;
}

namespace {

bool unit_solution_exists_mod_p(const CoefficientTriple& coeffs, u64 p) {
  // s_p <= 5, so every prime above 5 has a unit point (and it lifts).
  if (p > 5) return true;
  return count_mod_p(coeffs, p) > 0;
}

}  // namespace

std::optional<SmallestSolution> smallest_solution(const CoefficientTriple& coeffs, const PrimePowerModulus& pp,
                                                  u64 budget) {
  const u64 p = pp.p();
  const u64 q = pp.q();
  if (q > 10'000'000'000ULL) throw BudgetExceeded("smallest_solution: q limited to 10^10");
  if (!unit_solution_exists_mod_p(coeffs, p)) return std::nullopt;

  auto unit = [&](i64 v) { return v % static_cast<i64>(p) != 0; };
  auto sq = [&](u64 c, i64 x) { return mul_mod(c, mul_mod(static_cast<u64>(x), static_cast<u64>(x), q), q); };
  // Least positive y with c_other * y^2 = -(c_a x_a^2 + c_b x_b^2), if it is <= bound.
  auto solve_for = [&](u64 c_target, u64 partial, i64 bound) -> std::optional<i64> {
    const u64 rhs = mul_mod(sub_mod(0, partial, q), mod_inverse(static_cast<i64>(c_target), q), q);
    if (rhs % p == 0) return std::nullopt;
    auto r = sqrt_mod_prime_power(static_cast<i64>(rhs), pp);
    if (!r) return std::nullopt;
    const i64 y = static_cast<i64>(std::min(*r, q - *r));
    if (y > bound) return std::nullopt;
    return y;
  };

  const i64 limit = static_cast<i64>(q / 2);
  u64 spent = 0;
  for (i64 m = 1; m <= limit; ++m) {
    spent += 3 * static_cast<u64>(m);
    if (spent > budget) {
      throw BudgetExceeded("smallest_solution: search passed the work budget of " + std::to_string(budget) +
                           " candidate visits at m = " + std::to_string(m));
    }
    std::optional<std::array<i64, 3>> best;
    auto consider = [&](std::array<i64, 3> t) {
      if (!best || t < *best) best = t;
    };
    if (unit(m)) {
      // x1 = m
      for (i64 x2 = 1; x2 <= m; ++x2) {
        if (!unit(x2)) continue;
        if (auto x3 = solve_for(coeffs[2], add_mod(sq(coeffs[0], m), sq(coeffs[1], x2), q), m)) consider({m, x2, *x3});
      }
      // x2 = m, x1 < m
      for (i64 x1 = 1; x1 < m; ++x1) {
        if (!unit(x1)) continue;
        if (auto x3 = solve_for(coeffs[2], add_mod(sq(coeffs[0], x1), sq(coeffs[1], m), q), m)) consider({x1, m, *x3});
      }
      // x3 = m, x1, x2 < m
      for (i64 x1 = 1; x1 < m; ++x1) {
        if (!unit(x1)) continue;
        if (auto x2 = solve_for(coeffs[1], add_mod(sq(coeffs[0], x1), sq(coeffs[2], m), q), m - 1)) consider({x1, *x2, m});
      }
    }
    if (best) return SmallestSolution{m, *best};
  }
  return std::nullopt;
}

u64 pair_visits(const PrimePowerModulus& pp, i64 half_width) {
  if (half_width <= 0) return 0;
  const u64 units = static_cast<u64>(half_width) - static_cast<u64>(half_width) / pp.p();
  return units * units;
}

namespace {

double scan_box(u64 q, double theta) { return std::ceil(std::pow(static_cast<double>(q), theta)); }

}  // namespace

u64 scan_cost(u64 p, unsigned n_lo, unsigned n_hi, const ScanOptions& options) {
  u64 total = 0;
  for (unsigned n = n_lo; n <= n_hi; ++n) {
    const PrimePowerModulus pp(p, n);
    total += pair_visits(pp, sweep_half_width(scan_box(pp.q(), options.theta), options.weight));
  }
  return total;
}

std::vector<CountReport> asymptotic_scan(const std::array<i64, 3>& coeffs, u64 p, unsigned n_lo, unsigned n_hi,
                                         const ScanOptions& options) {
  if (!(options.theta > 0.5 && options.theta <= 1.0)) throw DomainError("scan: theta must lie in (0.5, 1]");
  if (n_lo < 1 || n_hi < n_lo) throw DomainError("scan: empty or invalid n range");
  options.weight.validate();
  for (unsigned n = n_lo; n <= n_hi; ++n) {
    const PrimePowerModulus pp(p, n);
    const u64 cost = pair_visits(pp, sweep_half_width(scan_box(pp.q(), options.theta), options.weight));
    if (cost > options.budget) {
      throw BudgetExceeded("scan: n = " + std::to_string(n) + " needs " + std::to_string(cost) +
                           " pair visits, over the work budget of " + std::to_string(options.budget));
    }
  }

  std::vector<CountReport> out;
  for (unsigned n = n_lo; n <= n_hi; ++n) {
    const PrimePowerModulus pp(p, n);
    const CoefficientTriple c(coeffs, pp);
    CountReport report;
    report.p = p;
    report.n = n;
    report.q = pp.q();
    report.coeffs = coeffs;
    report.N = scan_box(pp.q(), options.theta);
    report.theta = options.theta;
    report.weight = options.weight.kind;
    report.observed = count_smoothed(c, pp, report.N, options.weight, options.plan);
    if (options.weight.kind == WeightKind::Sharp) report.observed_exact = static_cast<i64>(report.observed);
    const Prediction pred = predict_main_term(c, pp, report.N, options.weight);
    report.predicted = pred.value;
    report.vacuous = pred.vacuous;
    if (!pred.vacuous && pred.value > 0) report.ratio = report.observed / pred.value;
    out.push_back(report);
  }
  return out;
}

double poisson_selfcheck(const WeightSpec& w, double scale) {
  if (w.kind != WeightKind::Gaussian) throw DomainError("poisson_selfcheck: gaussian weight required");
  if (!(scale > 0)) throw DomainError("poisson_selfcheck: scale must be positive");
  // Terms beyond |argument| = 10 are below exp(-100 pi).
  auto symmetric_sum = [&](double step) {
    const i64 terms = static_cast<i64>(std::ceil(10.0 / step)) + 1;
    double s = 0;
    for (i64 m = terms; m >= 1; --m) s += 2.0 * w.value(step * static_cast<double>(m));
    return s + w.value(0.0);
  };
  const double direct = symmetric_sum(1.0 / scale);
  const double dual = scale * symmetric_sum(scale);  // Phi^ = Phi for the Gaussian
  return std::abs(direct - dual);
}

}  // namespace conic_lab
