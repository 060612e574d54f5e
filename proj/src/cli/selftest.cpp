#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "conic_lab/census.hpp"
#include "conic_lab/conic.hpp"
#include "conic_lab/dioph.hpp"
#include "conic_lab/errors.hpp"
#include "conic_lab/expsum.hpp"
#include "conic_lab/random.hpp"

namespace conic_lab::cli {

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

using Check = std::function<Outcome()>;

std::array<i64, 3> random_units(SplitMix64& rng, u64 p) {
  std::array<i64, 3> a{};
  for (auto& v : a) v = rng.uniform(1, static_cast<i64>(p) - 1);
  return a;
}

Outcome prime_law() {
  long checked = 0;
  for (u64 p : {3, 5, 7}) {
    const PrimePowerModulus pp(p, 1);
    for (i64 a = 1; a < static_cast<i64>(p); ++a)
      for (i64 b = 1; b < static_cast<i64>(p); ++b)
        for (i64 c = 1; c < static_cast<i64>(p); ++c) {
          const CoefficientTriple t(a, b, c, pp);
          const i64 expect = static_cast<i64>(p - 1) * (static_cast<i64>(p) - s_p(t, p));
          if (count_mod_p(t, p) != expect) return {false, "p=" + std::to_string(p) + " triple failed"};
          ++checked;
        }
  }
  return {true, std::to_string(checked) + " triples"};
}

Outcome unit_circle() {
  long checked = 0;
  for (u64 p : {3, 7}) {
    for (unsigned n = 1; n <= 3; ++n) {
      const PrimePowerModulus pp(p, n);
      for (u64 g1 = 1; g1 < p; ++g1)
        for (u64 g2 = 1; g2 < p; ++g2) {
          if (jacobi(-static_cast<i64>(g1 * g2), static_cast<i64>(p)) != -1) continue;
          if (count_unit_circle(g1, g2, pp) != pp.q() + pp.q() / p) return {false, "count mismatch"};
          ++checked;
        }
    }
  }
  return {true, std::to_string(checked) + " instances"};
}

Outcome param_coverage() {
  SplitMix64 rng(11);
  long checked = 0;
  for (u64 p : {3, 7}) {
    const PrimePowerModulus pp(p, 2);
    for (int i = 0; i < 12; ++i) {
      const CoefficientTriple c(random_units(rng, p), pp);
      if (classify(c, p) == ParamCase::CaseI) {
        const ParamFamily f = build_case1_family(c, pp);
        const auto pairs = f.sorted_pairs();
        const std::set<SolutionPair> distinct(pairs.begin(), pairs.end());
        const u64 expect = (pp.q() / p) * static_cast<u64>(static_cast<i64>(p) - s_p(c, p));
        if (distinct.size() != pairs.size() || pairs.size() != expect) return {false, "Case I image size"};
        if (pairs != enumerate_pair_solutions(c, pp, true)) return {false, "Case I image differs"};
      } else {
        const ParamFamily f = build_case2_family(c, pp, find_base_point(c, pp));
        if (f.sorted_pairs() != enumerate_pair_solutions(c, pp, false)) return {false, "Case II set differs"};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " triples"};
}

Outcome hensel() {
  SplitMix64 rng(12);
  long checked = 0;
  for (u64 p : {7, 11}) {
    const PrimePowerModulus pp(p, 2);
    const PrimePowerModulus deeper = pp.lifted();
    for (int i = 0; i < 5; ++i) {
      const CoefficientTriple c(random_units(rng, p), pp);
      const auto pairs = enumerate_pair_solutions(c, pp, true);
      if (pairs.empty()) continue;
      const auto& z = pairs[static_cast<std::size_t>(rng.uniform(0, static_cast<i64>(pairs.size()) - 1))];
      const auto lifts = lift_triple({z.y1, z.y2, 1}, c, pp);
      const CoefficientTriple cd = c.reduced(deeper);
      std::set<Triple> distinct(lifts.begin(), lifts.end());
      if (lifts.size() != p * p || distinct.size() != lifts.size()) return {false, "lift count"};
      for (const auto& t : lifts) {
        u64 v = 0;
        for (int k = 0; k < 3; ++k) v = add_mod(v, mul_mod(cd[k], mul_mod(t[k], t[k], deeper.q()), deeper.q()), deeper.q());
        if (v != 0) return {false, "lift off the congruence"};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " solutions"};
}

Outcome cochrane() {
  SplitMix64 rng(13);
  long compared = 0;
  double worst = 0;
  for (u64 p : {3, 7}) {
    for (unsigned n : {3u, 4u}) {
      const PrimePowerModulus pp(p, n);
      for (int i = 0; i < 10; ++i) {
        Polynomial poly{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)};
        const auto f = IntRationalFunction::polynomial(poly);
        if (f.derivative_numer().is_zero()) continue;
        for (u64 alpha = 0; alpha < p; ++alpha) {
          try {
            const ComplexValue closed = cochrane_evaluate(f, alpha, pp);
            const ComplexValue direct = direct_S_alpha(f, alpha, pp);
            worst = std::max(worst, std::abs(closed - direct) / std::max(1.0, std::abs(direct)));
            ++compared;
          } catch (const UnsupportedCase&) {
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << compared << " sums, max rel err " << format_double(worst);
  return {worst < 1e-6 && compared > 0, os.str()};
}

Outcome closed_form() {
  long compared = 0;
  double worst = 0;
  struct Setting {
    u64 p;
    unsigned n;
    std::array<i64, 3> a;
    ParamCase c;
  };
  for (const Setting& s : {Setting{7, 3, {1, 1, -1}, ParamCase::CaseI}, Setting{3, 4, {1, 1, 1}, ParamCase::CaseII}}) {
    const PrimePowerModulus pp(s.p, s.n);
    const CoefficientTriple c(s.a, pp);
    for (i64 k1 = 1; k1 <= 4; ++k1)
      for (i64 k2 = 1; k2 <= 4; ++k2) {
        try {
          const ComplexValue closed = closed_form_E(k1, k2, 1, c, pp, s.c);
          const ComplexValue direct = direct_E(k1, k2, 1, c, pp, s.c);
          worst = std::max(worst, std::abs(closed - direct) / std::max(1.0, std::abs(direct)));
          ++compared;
        } catch (const UnsupportedCase&) {
        }
      }
  }
  std::ostringstream os;
  os << compared << " sums, max rel err " << format_double(worst);
  return {worst < 1e-6 && compared > 0, os.str()};
}

bool squarefree(u64 q) {
  for (u64 d = 2; d * d <= q; ++d)
    if (q % (d * d) == 0) return false;
  return true;
}

Outcome gauss() {
  double worst = 0;
  for (u64 q = 3; q < 400; q += 2) {
    const ComplexValue g = gauss_sum(q);
    worst = std::max(worst, std::abs(std::norm(g) - static_cast<double>(q)) / static_cast<double>(q));
    if (squarefree(q)) worst = std::max(worst, std::abs(g - gauss_sum_character(q)) / std::sqrt(static_cast<double>(q)));
  }
  return {worst < 1e-9, "max rel err " + format_double(worst)};
}

Outcome census(unsigned threads) {
  SplitMix64 rng(14);
  long checked = 0;
  for (int i = 0; i < 6; ++i) {
    const u64 p = i % 2 ? 7 : 5;
    const PrimePowerModulus pp(p, 2);
    const auto a = random_units(rng, p);
    const CoefficientTriple c(a, pp);
    const i64 N = rng.uniform(1, 12);
    i64 naive = 0;
    const i64 qi = static_cast<i64>(pp.q());
    for (i64 x1 = -N; x1 <= N; ++x1)
      for (i64 x2 = -N; x2 <= N; ++x2)
        for (i64 x3 = -N; x3 <= N; ++x3) {
          if (x1 % static_cast<i64>(p) == 0 || x2 % static_cast<i64>(p) == 0 || x3 % static_cast<i64>(p) == 0) continue;
          if ((a[0] * x1 * x1 + a[1] * x2 * x2 + a[2] * x3 * x3) % qi == 0) ++naive;
        }
    ParallelPlan many;
    many.workers = std::max(2u, threads);
    many.stripe = 1;
    if (count_sharp(c, pp, N) != naive || count_sharp(c, pp, N, many) != naive) return {false, "count mismatch"};
    ++checked;
  }
  return {true, std::to_string(checked) + " boxes"};
}

Outcome diophantine() {
  SplitMix64 rng(15);
  for (int i = 0; i < 1000; ++i) {
    const u64 q = static_cast<u64>(rng.uniform(2, 1'000'000));
    const u64 beta = static_cast<u64>(rng.uniform(0, static_cast<i64>(q) - 1));
    const i64 Q = rng.uniform(1, 5000);
    if (!dirichlet_approx(beta, q, Q).satisfies_bound()) return {false, "approximant bound"};
  }
  for (i64 M = 1; M <= 10; ++M) {
    const u64 q = static_cast<u64>(8 * M * M + 1);
    if (count_F(2, 2, 2 * M * M, q) != 4 * M * M) return {false, "F equality"};
  }
  const PrimePowerModulus pp(7, 2);
  const auto red = reduce_coefficients(1, 22, 1, pp, 7);
  if (!red.equivalent) return {false, "r shares a factor with p"};
  for (u64 x1 = 1; x1 < 49; ++x1)
    for (u64 x2 = 1; x2 < 49; ++x2)
      for (u64 x3 = 1; x3 < 49; ++x3) {
        if (x1 % 7 == 0 || x2 % 7 == 0 || x3 % 7 == 0) continue;
        const bool orig = (x1 * x1 + 22 * x2 * x2 + x3 * x3) % 49 == 0;
        const i64 lhs = red.r * static_cast<i64>(x3 * x3) - red.g1 * static_cast<i64>(x1 * x1) -
                        red.g2 * static_cast<i64>(x2 * x2);
        if (orig != (reduce_mod(lhs, 49) == 0)) return {false, "reduction changed the solution set"};
      }
  return {true, "approximants, F, reduction"};
}

}  // namespace

SelftestResult run_selftest(unsigned threads) {
  SelftestResult result;
  result.table.header = {"schema_version", "check", "status", "detail"};
  const std::vector<std::pair<std::string, Check>> checks = {
      {"prime_law", prime_law},
      {"unit_circle", unit_circle},
      {"param_coverage", param_coverage},
      {"hensel", hensel},
      {"cochrane", cochrane},
      {"closed_form", closed_form},
      {"gauss_sums", gauss},
      {"census", [threads] { return census(threads); }},
      {"diophantine", diophantine},
  };
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    result.passed = result.passed && o.ok;
    result.table.add({std::int64_t{kSchemaVersion}, name, std::string(o.ok ? "pass" : "fail"), o.detail});
  }
  return result;
}

}  // namespace conic_lab::cli
