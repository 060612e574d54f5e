#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace conic_lab::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kOutputOnlyFields = {
    "schema_version", "observed", "observed_exact", "predicted", "ratio", "vacuous", "m", "x1", "x2",
    "s_p", "C_p", "family_size", "expected_size", "solutions", "match", "closed_re", "closed_im",
    "direct_re", "direct_im", "abs_error", "status", "check", "detail", "count", "value", "R",
    "a", "r", "r1", "r2", "a_1", "a_2", "g1", "g2", "equivalent", "bound_ok", "L_r", "q_r", "tau", "F",
    "normalized"};

[[noreturn]] void field_error(const std::string& origin, const std::string& key, const std::string& what) {
  throw ConfigError("config " + origin + ": field '" + key + "': " + what);
}

template <class T>
T as_integer(const json& v, const std::string& origin, const std::string& key) {
  if (v.is_number_integer()) {
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
      if (v.get<std::int64_t>() < 0) field_error(origin, key, "must be nonnegative");
      return static_cast<T>(v.get<std::int64_t>());
    } else {
      return static_cast<T>(v.get<std::int64_t>());
    }
  }
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == static_cast<double>(static_cast<std::int64_t>(d))) return as_integer<T>(json(static_cast<std::int64_t>(d)), origin, key);
  }
  field_error(origin, key, "expected an integer");
}

double as_double(const json& v, const std::string& origin, const std::string& key) {
  if (!v.is_number()) field_error(origin, key, "expected a number");
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& origin, const std::string& key) {
  if (!v.is_boolean()) field_error(origin, key, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& origin, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  field_error(origin, key, "expected a string");
}

}  // namespace

std::array<i64, 3> parse_coeffs(const std::string& text) {
  std::array<i64, 3> out{};
  std::stringstream ss(text);
  std::string item;
  int count = 0;
  while (std::getline(ss, item, ',')) {
    if (count == 3) throw ConfigError("coeffs: expected exactly three integers, got '" + text + "'");
    try {
      std::size_t used = 0;
      out[count] = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError("coeffs: '" + item + "' is not an integer");
    }
    ++count;
  }
  if (count != 3) throw ConfigError("coeffs: expected exactly three integers, got '" + text + "'");
  return out;
}

std::pair<unsigned, unsigned> parse_range(const std::string& text) {
  auto parse_one = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      long v = std::stol(s, &used);
      if (used != s.size() || v < 1 || v > 62) throw std::invalid_argument(s);
      return static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
      throw ConfigError("n: '" + text + "' is not an exponent or a range lo..hi with 1 <= lo <= hi <= 62");
    }
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    unsigned v = parse_one(text);
    return {v, v};
  }
  unsigned lo = parse_one(text.substr(0, dots));
  unsigned hi = parse_one(text.substr(dots + 2));
  if (hi < lo) throw ConfigError("n: empty range '" + text + "'");
  return {lo, hi};
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "jsonl") return OutputFormat::Jsonl;
  throw ConfigError("format: expected csv or jsonl, got '" + text + "'");
}

unsigned ExperimentConfig::n_single() const {
  auto [lo, hi] = parse_range(n);
  if (lo != hi) throw ConfigError("n: subcommand " + subcommand + " takes a single exponent, got '" + n + "'");
  return lo;
}

std::pair<unsigned, unsigned> ExperimentConfig::n_range() const { return parse_range(n); }

WeightSpec ExperimentConfig::weight() const {
  WeightSpec w;
  w.kind = sharp ? WeightKind::Sharp : WeightKind::Gaussian;
  w.truncation_radius = radius;
  return w;
}

ParallelPlan ExperimentConfig::plan() const {
  ParallelPlan plan;
  plan.workers = threads;
  return plan;
}

void load_config_json(const std::string& text, const std::string& origin, ExperimentConfig& cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + origin + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config " + origin + ": expected a JSON object");

  std::array<std::optional<i64>, 3> split;
  for (const auto& [key, v] : doc.items()) {
    if (key == "p") cfg.p = as_integer<u64>(v, origin, key);
    else if (key == "n") cfg.n = as_string(v, origin, key);
    else if (key == "coeffs") {
      if (v.is_string()) {
        cfg.coeffs = parse_coeffs(v.get<std::string>());
      } else if (v.is_array() && v.size() == 3) {
        std::array<i64, 3> c{};
        for (int i = 0; i < 3; ++i) c[i] = as_integer<i64>(v[i], origin, key);
        cfg.coeffs = c;
      } else {
        field_error(origin, key, "expected \"a1,a2,a3\" or a three-element array");
      }
    } else if (key == "a1" || key == "a2" || key == "a3") {
      split[key[1] - '1'] = as_integer<i64>(v, origin, key);
    }
    else if (key == "samples") cfg.samples = as_integer<unsigned>(v, origin, key);
    else if (key == "seed") {
      if (!v.is_null()) cfg.seed = as_integer<u64>(v, origin, key);
    }
    else if (key == "N") cfg.N = as_double(v, origin, key);
    else if (key == "sharp") cfg.sharp = as_bool(v, origin, key);
    else if (key == "weight") {
      const std::string w = as_string(v, origin, key);
      if (w != "sharp" && w != "gaussian") field_error(origin, key, "expected sharp or gaussian");
      cfg.sharp = w == "sharp";
    }
    else if (key == "radius") cfg.radius = as_double(v, origin, key);
    else if (key == "theta") cfg.theta = as_double(v, origin, key);
    else if (key == "k1") cfg.k1 = as_integer<i64>(v, origin, key);
    else if (key == "k2") cfg.k2 = as_integer<i64>(v, origin, key);
    else if (key == "x3") cfg.x3 = as_integer<i64>(v, origin, key);
    else if (key == "case") cfg.param_case = as_string(v, origin, key);
    else if (key == "tolerance") cfg.tolerance = as_double(v, origin, key);
    else if (key == "fallback_direct" || key == "fallback-direct") cfg.fallback_direct = as_bool(v, origin, key);
    else if (key == "op") cfg.op = as_string(v, origin, key);
    else if (key == "A") cfg.A = as_integer<i64>(v, origin, key);
    else if (key == "B") cfg.B = as_integer<i64>(v, origin, key);
    else if (key == "C") cfg.C = as_integer<i64>(v, origin, key);
    else if (key == "x") cfg.x = as_integer<i64>(v, origin, key);
    else if (key == "k") cfg.k = as_integer<u64>(v, origin, key);
    else if (key == "beta") cfg.beta = as_integer<u64>(v, origin, key);
    else if (key == "q") cfg.q = as_integer<u64>(v, origin, key);
    else if (key == "Q") cfg.Q = as_integer<i64>(v, origin, key);
    else if (key == "b1") cfg.b1 = as_integer<u64>(v, origin, key);
    else if (key == "b2") cfg.b2 = as_integer<u64>(v, origin, key);
    else if (key == "b3") cfg.b3 = as_integer<u64>(v, origin, key);
    else if (key == "X") cfg.X = as_integer<i64>(v, origin, key);
    else if (key == "M") cfg.M = as_integer<u64>(v, origin, key);
    else if (key == "eps") cfg.eps = as_double(v, origin, key);
    else if (key == "level") cfg.level = as_integer<unsigned>(v, origin, key);
    else if (key == "threads") cfg.threads = as_integer<unsigned>(v, origin, key);
    else if (key == "budget") cfg.budget = as_integer<u64>(v, origin, key);
    else if (key == "dry_run" || key == "dry-run") cfg.dry_run = as_bool(v, origin, key);
    else if (key == "format") cfg.format = parse_format(as_string(v, origin, key));
    else if (key == "out") cfg.out = as_string(v, origin, key);
    else if (kOutputOnlyFields.count(key) == 0) field_error(origin, key, "unknown field");
  }
  const int given = static_cast<int>(split[0].has_value()) + split[1].has_value() + split[2].has_value();
  if (given == 3) {
    cfg.coeffs = std::array<i64, 3>{*split[0], *split[1], *split[2]};
  } else if (given != 0) {
    throw ConfigError("config " + origin + ": a1, a2 and a3 must be given together");
  }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config " + path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  load_config_json(buf.str(), path, cfg);
}

void apply_environment(ExperimentConfig& cfg) {
  const char* env = std::getenv("CONIC_LAB_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) {
    throw ConfigError(std::string("CONIC_LAB_THREADS: expected an integer in [1, 1024], got '") + env + "'");
  }
  cfg.threads = static_cast<unsigned>(v);
}

}  // namespace conic_lab::cli
