#include "conic_lab/cli.hpp"

#include <cmath>
#include <cstring>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "config.hpp"
#include "conic_lab/census.hpp"
#include "conic_lab/conic.hpp"
#include "conic_lab/dioph.hpp"
#include "conic_lab/errors.hpp"
#include "conic_lab/expsum.hpp"
#include "conic_lab/random.hpp"
#include "emit.hpp"
#include "selftest.hpp"

namespace conic_lab::cli {

namespace {

using std::int64_t;
using std::uint64_t;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;

Field seed_field(const ExperimentConfig& cfg) {
  if (cfg.samples == 0) return std::monostate{};
  return uint64_t{cfg.seed};
}

Field optional_double(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

std::vector<std::array<i64, 3>> coefficient_triples(const ExperimentConfig& cfg, const PrimePowerModulus& pp) {
  if (cfg.samples > 0) {
    SplitMix64 rng(cfg.seed);
    std::vector<std::array<i64, 3>> out;
    for (unsigned i = 0; i < cfg.samples; ++i) {
      std::array<i64, 3> a{};
      for (auto& v : a) {
        do {
          v = rng.uniform(1, static_cast<i64>(pp.q()) - 1);
        } while (v % static_cast<i64>(pp.p()) == 0);
      }
      out.push_back(a);
    }
    return out;
  }
  if (!cfg.coeffs) throw ConfigError("coeffs: required (or --samples with --seed)");
  return {*cfg.coeffs};
}

PrimePowerModulus modulus(const ExperimentConfig& cfg, unsigned n) {
  try {
    return PrimePowerModulus(cfg.p, n);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("p/n: ") + e.what());
  }
}

void validate_common(const ExperimentConfig& cfg) {
  if (cfg.threads < 1 || cfg.threads > 1024) throw ConfigError("threads: expected an integer in [1, 1024]");
  if (!(cfg.tolerance > 0)) throw ConfigError("tolerance: must be positive");
}

// Either prints the dry-run report, or refuses work over budget, or returns
// normally so the caller proceeds.
struct WorkGate {
  const ExperimentConfig& cfg;
  std::ostream& out;

  // true when the caller should stop (dry run handled).
  bool stop_before(u64 work, int& exit_code) const {
    const bool within = work <= cfg.budget;
    if (cfg.dry_run) {
      Table t;
      t.header = {"schema_version", "subcommand", "work_units", "budget", "within_budget"};
      t.add({int64_t{kSchemaVersion}, cfg.subcommand, uint64_t{work}, uint64_t{cfg.budget}, within});
      emit_to(t, cfg, out);
      exit_code = within ? kExitOk : kExitInvalid;
      return true;
    }
    if (!within) {
      throw BudgetExceeded(cfg.subcommand + ": estimated " + std::to_string(work) +
                           " work units exceed the budget of " + std::to_string(cfg.budget) + " (--budget)");
    }
    return false;
  }
};

u64 saturating_mul(u64 a, u64 b) {
  if (a != 0 && b > ~u64{0} / a) return ~u64{0};
  return a * b;
}

int do_count(const ExperimentConfig& cfg, std::ostream& out) {
  const PrimePowerModulus pp = modulus(cfg, cfg.n_single());
  const WeightSpec w = cfg.weight();
  w.validate();
  if (!(cfg.N >= 0) || !std::isfinite(cfg.N)) throw ConfigError("N: must be a finite nonnegative number");
  const auto triples = coefficient_triples(cfg, pp);
  int code = 0;
  const u64 work = saturating_mul(pair_visits(pp, sweep_half_width(cfg.N, w)), triples.size());
  if (WorkGate{cfg, out}.stop_before(work, code)) return code;

  Table t;
  t.header = {"schema_version", "p", "n", "q", "a1", "a2", "a3", "N", "weight", "observed", "predicted", "ratio", "seed"};
  for (const auto& a : triples) {
    const CoefficientTriple c(a, pp);
    Field observed;
    double obs = 0;
    if (w.kind == WeightKind::Sharp) {
      const i64 v = count_sharp(c, pp, static_cast<i64>(std::floor(cfg.N)), cfg.plan());
      observed = int64_t{v};
      obs = static_cast<double>(v);
    } else {
      obs = count_smoothed(c, pp, cfg.N, w, cfg.plan());
      observed = obs;
    }
    const Prediction pred = predict_main_term(c, pp, cfg.N, w);
    std::optional<double> ratio;
    if (!pred.vacuous && pred.value > 0) ratio = obs / pred.value;
    t.add({int64_t{kSchemaVersion}, uint64_t{pp.p()}, uint64_t{pp.n()}, uint64_t{pp.q()}, int64_t{a[0]}, int64_t{a[1]},
           int64_t{a[2]}, cfg.N, std::string(to_string(w.kind)), observed, pred.value, optional_double(ratio),
           seed_field(cfg)});
  }
  emit_to(t, cfg, out);
  return kExitOk;
}

int do_predict(const ExperimentConfig& cfg, std::ostream& out) {
  const PrimePowerModulus pp = modulus(cfg, cfg.n_single());
  const WeightSpec w = cfg.weight();
  w.validate();
  if (!(cfg.N > 0) || !std::isfinite(cfg.N)) throw ConfigError("N: must be a finite positive number");
  const auto triples = coefficient_triples(cfg, pp);
  int code = 0;
  if (WorkGate{cfg, out}.stop_before(triples.size(), code)) return code;

  Table t;
  t.header = {"schema_version", "p", "n", "q", "a1", "a2", "a3", "N", "weight", "s_p", "C_p", "predicted", "vacuous", "seed"};
  for (const auto& a : triples) {
    const CoefficientTriple c(a, pp);
    const Prediction pred = predict_main_term(c, pp, cfg.N, w);
    t.add({int64_t{kSchemaVersion}, uint64_t{pp.p()}, uint64_t{pp.n()}, uint64_t{pp.q()}, int64_t{a[0]}, int64_t{a[1]},
           int64_t{a[2]}, cfg.N, std::string(to_string(w.kind)), int64_t{s_p(c, pp.p())},
           main_constant(c, pp.p()).to_double(), pred.value, pred.vacuous, seed_field(cfg)});
  }
  emit_to(t, cfg, out);
  return kExitOk;
}

int do_scan(const ExperimentConfig& cfg, std::ostream& out) {
  const auto [lo, hi] = cfg.n_range();
  const PrimePowerModulus top = modulus(cfg, hi);
  ScanOptions options;
  options.theta = cfg.theta;
  options.weight = cfg.weight();
  options.budget = cfg.budget;
  options.plan = cfg.plan();
  options.weight.validate();
  if (!(cfg.theta > 0.5 && cfg.theta <= 1.0)) throw ConfigError("theta: must lie in (0.5, 1]");
  const auto triples = coefficient_triples(cfg, top);
  int code = 0;
  const u64 work = saturating_mul(scan_cost(cfg.p, lo, hi, options), triples.size());
  if (WorkGate{cfg, out}.stop_before(work, code)) return code;

  Table t;
  t.header = {"schema_version", "p", "n", "q", "a1", "a2", "a3", "N", "theta", "weight",
              "observed", "predicted", "ratio", "seed"};
  for (const auto& a : triples) {
    for (const CountReport& r : asymptotic_scan(a, cfg.p, lo, hi, options)) {
      t.add({int64_t{kSchemaVersion}, uint64_t{r.p}, uint64_t{r.n}, uint64_t{r.q}, int64_t{a[0]}, int64_t{a[1]},
             int64_t{a[2]}, r.N, *r.theta, std::string(to_string(r.weight)), r.observed, r.predicted,
             optional_double(r.ratio), seed_field(cfg)});
    }
  }
  emit_to(t, cfg, out);
  return kExitOk;
}

int do_smallest(const ExperimentConfig& cfg, std::ostream& out) {
  const PrimePowerModulus pp = modulus(cfg, cfg.n_single());
  const auto triples = coefficient_triples(cfg, pp);
  int code = 0;
  // A unit solution with max-norm about sqrt(q) is typical; each shell m costs 3m visits.
  const u64 estimate = saturating_mul(pp.q() + pp.q() / 2, triples.size());
  if (WorkGate{cfg, out}.stop_before(estimate, code)) return code;

  Table t;
  t.header = {"schema_version", "p", "n", "q", "a1", "a2", "a3", "m", "x1", "x2", "x3", "seed"};
  for (const auto& a : triples) {
    const CoefficientTriple c(a, pp);
    const auto s = smallest_solution(c, pp, cfg.budget);
    std::vector<Field> row{int64_t{kSchemaVersion}, uint64_t{pp.p()}, uint64_t{pp.n()}, uint64_t{pp.q()},
                           int64_t{a[0]}, int64_t{a[1]}, int64_t{a[2]}};
    if (s) {
      row.insert(row.end(), {int64_t{s->m}, int64_t{s->witness[0]}, int64_t{s->witness[1]}, int64_t{s->witness[2]}});
    } else {
      row.insert(row.end(), {int64_t{0}, std::monostate{}, std::monostate{}, std::monostate{}});
    }
    row.push_back(seed_field(cfg));
    t.add(std::move(row));
  }
  emit_to(t, cfg, out);
  return kExitOk;
}

int do_param_check(const ExperimentConfig& cfg, std::ostream& out) {
  const PrimePowerModulus pp = modulus(cfg, cfg.n_single());
  const auto triples = coefficient_triples(cfg, pp);
  int code = 0;
  if (WorkGate{cfg, out}.stop_before(saturating_mul(2 * pp.q(), triples.size()), code)) return code;

  Table t;
  t.header = {"schema_version", "p", "n", "q", "a1", "a2", "a3", "case", "s_p",
              "family_size", "expected_size", "solutions", "match", "seed"};
  bool all_match = true;
  for (const auto& a : triples) {
    const CoefficientTriple c(a, pp);
    const ParamCase kind = classify(c, pp.p());
    const int sp = s_p(c, pp.p());
    u64 expected = 0;
    ParamFamily family;
    std::vector<SolutionPair> solutions;
    if (kind == ParamCase::CaseI) {
      family = build_case1_family(c, pp);
      expected = pp.power(pp.n() - 1) * static_cast<u64>(static_cast<i64>(pp.p()) - sp);
      solutions = enumerate_pair_solutions(c, pp, true);
    } else {
      family = build_case2_family(c, pp, find_base_point(c, pp));
      expected = pp.q() + pp.q() / pp.p();
      solutions = enumerate_pair_solutions(c, pp, false);
    }
    const auto pairs = family.sorted_pairs();
    const bool injective = std::set<SolutionPair>(pairs.begin(), pairs.end()).size() == pairs.size();
    const bool match = injective && pairs.size() == expected && pairs == solutions;
    all_match = all_match && match;
    t.add({int64_t{kSchemaVersion}, uint64_t{pp.p()}, uint64_t{pp.n()}, uint64_t{pp.q()}, int64_t{a[0]}, int64_t{a[1]},
           int64_t{a[2]}, std::string(to_string(kind)), int64_t{sp}, uint64_t{pairs.size()}, uint64_t{expected},
           uint64_t{solutions.size()}, match, seed_field(cfg)});
  }
  emit_to(t, cfg, out);
  return all_match ? kExitOk : kExitInternal;
}

ParamCase resolve_case(const ExperimentConfig& cfg, const CoefficientTriple& c, u64 p) {
  if (cfg.param_case == "auto") return classify(c, p);
  if (cfg.param_case == "I" || cfg.param_case == "1") return ParamCase::CaseI;
  if (cfg.param_case == "II" || cfg.param_case == "2") return ParamCase::CaseII;
  throw ConfigError("case: expected auto, I or II, got '" + cfg.param_case + "'");
}

int do_expsum_check(const ExperimentConfig& cfg, std::ostream& out) {
  const PrimePowerModulus pp = modulus(cfg, cfg.n_single());
  if (!cfg.coeffs) throw ConfigError("coeffs: required");
  const CoefficientTriple c(*cfg.coeffs, pp);
  const ParamCase kind = resolve_case(cfg, c, pp.p());

  struct Instance {
    i64 k1, k2, x3;
  };
  std::vector<Instance> instances;
  if (cfg.samples > 0) {
    SplitMix64 rng(cfg.seed);
    const i64 q = static_cast<i64>(pp.q());
    for (unsigned i = 0; i < cfg.samples; ++i) {
      Instance in{rng.uniform(1, q - 1), rng.uniform(1, q - 1), 0};
      do {
        in.x3 = rng.uniform(1, q - 1);
      } while (in.x3 % static_cast<i64>(pp.p()) == 0);
      instances.push_back(in);
    }
  } else {
    instances.push_back({cfg.k1, cfg.k2, cfg.x3});
  }
  int code = 0;
  if (WorkGate{cfg, out}.stop_before(saturating_mul(2 * pp.q(), instances.size()), code)) return code;

  Table t;
  t.header = {"schema_version", "p", "n", "q", "a1", "a2", "a3", "case", "k1", "k2", "x3",
              "closed_re", "closed_im", "direct_re", "direct_im", "abs_error", "status", "seed"};
  bool all_ok = true;
  const auto& a = *cfg.coeffs;
  for (const Instance& in : instances) {
    const ComplexValue direct = direct_E(in.k1, in.k2, in.x3, c, pp, kind);
    ComplexValue closed;
    std::string status;
    try {
      closed = closed_form_E(in.k1, in.k2, in.x3, c, pp, kind);
      const bool ok = std::abs(closed - direct) <= cfg.tolerance * std::max(1.0, std::abs(direct));
      status = ok ? "ok" : "mismatch";
      all_ok = all_ok && ok;
    } catch (const UnsupportedCase& e) {
      if (!cfg.fallback_direct) throw;
      closed = direct;
      status = "direct-fallback";
    }
    t.add({int64_t{kSchemaVersion}, uint64_t{pp.p()}, uint64_t{pp.n()}, uint64_t{pp.q()}, int64_t{a[0]}, int64_t{a[1]},
           int64_t{a[2]}, std::string(to_string(kind)), int64_t{in.k1}, int64_t{in.k2}, int64_t{in.x3}, closed.real(),
           closed.imag(), direct.real(), direct.imag(), std::abs(closed - direct), status, seed_field(cfg)});
  }
  emit_to(t, cfg, out);
  return all_ok ? kExitOk : kExitInternal;
}

int do_dioph(const ExperimentConfig& cfg, std::ostream& out) {
  Table t;
  int code = 0;
  const WorkGate gate{cfg, out};
  const Field version = int64_t{kSchemaVersion};
  if (cfg.op == "equation") {
    if (gate.stop_before(2 * static_cast<u64>(std::max<i64>(cfg.x, 0)) + 1, code)) return code;
    t.header = {"schema_version", "A", "B", "C", "x", "count"};
    const i64 count = count_equation_solutions({cfg.A, cfg.B, cfg.C, cfg.x});
    t.add({version, int64_t{cfg.A}, int64_t{cfg.B}, int64_t{cfg.C}, int64_t{cfg.x}, int64_t{count}});
  } else if (cfg.op == "growth") {
    const std::array<i64, 3> widths{100, 1000, 10000};
    if (gate.stop_before(2 * (100 + 1000 + 10000) + 3, code)) return code;
    t.header = {"schema_version", "A", "B", "C", "x", "count", "normalized"};
    const double abc = std::abs(static_cast<double>(cfg.A) * static_cast<double>(cfg.B) * static_cast<double>(cfg.C));
    for (i64 x : widths) {
      const i64 count = count_equation_solutions({cfg.A, cfg.B, cfg.C, x});
      t.add({version, int64_t{cfg.A}, int64_t{cfg.B}, int64_t{cfg.C}, int64_t{x}, int64_t{count},
             static_cast<double>(count) / std::pow(abc * static_cast<double>(x), 0.1)});
    }
  } else if (cfg.op == "divisors") {
    if (gate.stop_before(static_cast<u64>(std::sqrt(static_cast<double>(cfg.k))) + 1, code)) return code;
    t.header = {"schema_version", "k", "tau"};
    t.add({version, uint64_t{cfg.k}, uint64_t{divisor_count(cfg.k)}});
  } else if (cfg.op == "approx") {
    if (gate.stop_before(128, code)) return code;
    if (cfg.q < 1) throw ConfigError("q: must be positive");
    const Approximant ap = dirichlet_approx(cfg.beta, cfg.q, cfg.Q);
    t.header = {"schema_version", "beta", "q", "Q", "a", "r", "bound_ok"};
    t.add({version, uint64_t{cfg.beta}, uint64_t{cfg.q}, int64_t{cfg.Q}, int64_t{ap.a}, int64_t{ap.r},
           ap.satisfies_bound()});
  } else if (cfg.op == "countF") {
    if (gate.stop_before(2 * static_cast<u64>(std::max<i64>(cfg.X, 0)), code)) return code;
    if (cfg.q < 1) throw ConfigError("q: must be positive");
    t.header = {"schema_version", "b1", "b2", "X", "q", "F"};
    t.add({version, uint64_t{cfg.b1}, uint64_t{cfg.b2}, int64_t{cfg.X}, uint64_t{cfg.q},
           int64_t{count_F(cfg.b1, cfg.b2, cfg.X, cfg.q)}});
  } else if (cfg.op == "reduce") {
    const PrimePowerModulus pp = modulus(cfg, cfg.n_single());
    if (gate.stop_before(256, code)) return code;
    const ReducedCoefficients red = reduce_coefficients(cfg.b1, cfg.b2, cfg.b3, pp, cfg.Q);
    t.header = {"schema_version", "p", "n", "q", "b1", "b2", "b3", "Q", "r1", "a_1", "r2", "a_2", "r", "g1", "g2",
                "equivalent"};
    t.add({version, uint64_t{pp.p()}, uint64_t{pp.n()}, uint64_t{pp.q()}, uint64_t{cfg.b1}, uint64_t{cfg.b2},
           uint64_t{cfg.b3}, int64_t{cfg.Q}, int64_t{red.first.r}, int64_t{red.first.a}, int64_t{red.second.r},
           int64_t{red.second.a}, int64_t{red.r}, int64_t{red.g1}, int64_t{red.g2}, red.equivalent});
  } else if (cfg.op == "params") {
    if (gate.stop_before(256, code)) return code;
    const ParameterChoice pc = choose_parameters(cfg.q, cfg.M);
    t.header = {"schema_version", "q", "M", "R", "Q"};
    t.add({version, uint64_t{cfg.q}, uint64_t{cfg.M}, uint64_t{pc.R}, uint64_t{pc.Q}});
  } else if (cfg.op == "scales") {
    const PrimePowerModulus pp = modulus(cfg, cfg.n_single());
    if (gate.stop_before(1, code)) return code;
    const ScaleParameters sc = scale_parameters(pp, cfg.level, cfg.N, cfg.eps);
    t.header = {"schema_version", "p", "n", "q", "level", "N", "eps", "L_r", "q_r"};
    t.add({version, uint64_t{pp.p()}, uint64_t{pp.n()}, uint64_t{pp.q()}, uint64_t{cfg.level}, cfg.N, cfg.eps,
           sc.L_r, sc.q_r});
  } else {
    throw ConfigError("op: expected equation, growth, divisors, approx, countF, reduce, params or scales; got '" +
                      cfg.op + "'");
  }
  emit_to(t, cfg, out);
  return kExitOk;
}

int do_selftest(const ExperimentConfig& cfg, std::ostream& out) {
  int code = 0;
  if (WorkGate{cfg, out}.stop_before(50'000'000, code)) return code;
  const SelftestResult r = run_selftest(cfg.threads);
  emit_to(r.table, cfg, out);
  return r.passed ? kExitOk : kExitInternal;
}

std::string find_config_path(int argc, const char* const* argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config") {
      if (i + 1 >= argc) throw ConfigError("--config: missing path");
      path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
    }
  }
  return path;
}

void add_common(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_option("--config", "JSON config file; flags override its values");
  sub->add_option_function<std::string>(
      "--format", [&cfg](const std::string& s) { cfg.format = parse_format(s); }, "csv (default) or jsonl");
  sub->add_option("--out", cfg.out, "output path (default stdout)");
  sub->add_option("--threads", cfg.threads, "worker threads (default $CONIC_LAB_THREADS or 1)");
  sub->add_option("--budget", cfg.budget, "work cap in (x1, x2) pair visits or equivalent units");
  sub->add_flag("--dry-run", cfg.dry_run, "print the work estimate and exit");
}

void add_modulus(CLI::App* sub, ExperimentConfig& cfg, bool range) {
  sub->add_option("--p", cfg.p, "odd prime");
  sub->add_option("--n", cfg.n, range ? "exponent range lo..hi (or a single n)" : "exponent n");
}

void add_coeffs(CLI::App* sub, ExperimentConfig& cfg, bool sampling) {
  sub->add_option_function<std::string>(
      "--coeffs", [&cfg](const std::string& s) { cfg.coeffs = parse_coeffs(s); }, "a1,a2,a3");
  if (sampling) {
    sub->add_option("--samples", cfg.samples, "draw this many random unit triples instead of --coeffs");
    sub->add_option("--seed", cfg.seed, "seed for --samples");
  }
}

void add_weight(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_flag("--sharp", cfg.sharp, "indicator weight on [-N, N] instead of the Gaussian");
  sub->add_option_function<std::string>(
      "--weight",
      [&cfg](const std::string& s) {
        if (s != "sharp" && s != "gaussian") throw ConfigError("weight: expected sharp or gaussian");
        cfg.sharp = s == "sharp";
      },
      "gaussian (default) or sharp");
  sub->add_option("--radius", cfg.radius, "Gaussian truncation radius in units of N (>= 6)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    apply_environment(cfg);
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) load_config_file(config_path, cfg);

    CLI::App app{"conic_lab: counting and parametrizing solutions of diagonal ternary quadratic congruences"};
    app.require_subcommand(1);

    auto* count = app.add_subcommand("count", "count unit solutions in a box (sharp or Gaussian-weighted)");
    add_modulus(count, cfg, false);
    add_coeffs(count, cfg, true);
    count->add_option("--N", cfg.N, "box size");
    add_weight(count, cfg);

    auto* predict = app.add_subcommand("predict", "main-term prediction Phi^(0)^3 C_p N^3 / q");
    add_modulus(predict, cfg, false);
    add_coeffs(predict, cfg, true);
    predict->add_option("--N", cfg.N, "box size");
    add_weight(predict, cfg);

    auto* scan = app.add_subcommand("scan", "observed/predicted ratio over a range of exponents, N = ceil(q^theta)");
    add_modulus(scan, cfg, true);
    add_coeffs(scan, cfg, true);
    scan->add_option("--theta", cfg.theta, "box exponent in (0.5, 1]");
    add_weight(scan, cfg);

    auto* smallest = app.add_subcommand("smallest", "least max-norm unit solution");
    add_modulus(smallest, cfg, false);
    add_coeffs(smallest, cfg, true);

    auto* param = app.add_subcommand("param-check", "compare the parametrized family with the solution set");
    add_modulus(param, cfg, false);
    add_coeffs(param, cfg, true);

    auto* expsum = app.add_subcommand("expsum-check", "closed-form E(k1, k2, x3) against direct summation");
    add_modulus(expsum, cfg, false);
    add_coeffs(expsum, cfg, false);
    expsum->add_option("--k1", cfg.k1);
    expsum->add_option("--k2", cfg.k2);
    expsum->add_option("--x3", cfg.x3);
    expsum->add_option("--samples", cfg.samples, "draw this many random (k1, k2, x3) instead");
    expsum->add_option("--seed", cfg.seed, "seed for --samples");
    expsum->add_option("--case", cfg.param_case, "auto, I or II");
    expsum->add_option("--tolerance", cfg.tolerance, "relative tolerance");
    expsum->add_flag("--fallback-direct", cfg.fallback_direct, "use the direct sum where no closed form applies");

    auto* dioph = app.add_subcommand("dioph", "Diophantine toolkit");
    dioph->add_option("--op", cfg.op, "equation | growth | divisors | approx | countF | reduce | params | scales");
    add_modulus(dioph, cfg, false);
    for (auto [name, field] : {std::pair{"--A", &cfg.A}, {"--B", &cfg.B}, {"--C", &cfg.C}, {"--x", &cfg.x},
                               {"--Q", &cfg.Q}, {"--X", &cfg.X}}) {
      dioph->add_option(name, *field);
    }
    for (auto [name, field] : {std::pair{"--k", &cfg.k}, {"--beta", &cfg.beta}, {"--q", &cfg.q}, {"--b1", &cfg.b1},
                               {"--b2", &cfg.b2}, {"--b3", &cfg.b3}, {"--M", &cfg.M}}) {
      dioph->add_option(name, *field);
    }
    dioph->add_option("--level", cfg.level, "r for the scales op");
    dioph->add_option("--N", cfg.N, "box size for the scales op");
    dioph->add_option("--eps", cfg.eps, "epsilon in L_r (default 0)");

    auto* selftest = app.add_subcommand("selftest", "run the bundled invariant suite");

    for (auto* sub : {count, predict, scan, smallest, param, expsum, dioph, selftest}) add_common(sub, cfg);

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e, out, err);
      return rc == 0 ? kExitOk : kExitInvalid;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    validate_common(cfg);

    if (chosen == count) return do_count(cfg, out);
    if (chosen == predict) return do_predict(cfg, out);
    if (chosen == scan) return do_scan(cfg, out);
    if (chosen == smallest) return do_smallest(cfg, out);
    if (chosen == param) return do_param_check(cfg, out);
    if (chosen == expsum) return do_expsum_check(cfg, out);
    if (chosen == dioph) return do_dioph(cfg, out);
    return do_selftest(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const BudgetExceeded& e) {
    err << "error: budget: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const UnsupportedCase& e) {
    err << "error: unsupported: " << e.what() << " (try --fallback-direct)\n";
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace conic_lab::cli
