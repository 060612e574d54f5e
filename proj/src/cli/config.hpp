#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "conic_lab/census.hpp"
#include "conic_lab/modcore.hpp"

namespace conic_lab::cli {

// Raised for malformed or out-of-range configuration; maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Csv, Jsonl };

struct ExperimentConfig {
  std::string subcommand;

  // Modulus and coefficients.
  u64 p = 7;
  std::string n = "1";  // single exponent, or lo..hi for scan
  std::optional<std::array<i64, 3>> coeffs;
  unsigned samples = 0;  // >0: draw this many random unit triples instead of coeffs
  u64 seed = 1;

  // Census.
  double N = 10;
  bool sharp = false;
  double radius = 6.0;
  double theta = 0.62;

  // Exponential sums.
  i64 k1 = 1;
  i64 k2 = 1;
  i64 x3 = 1;
  std::string param_case = "auto";
  double tolerance = 1e-6;
  bool fallback_direct = false;

  // Diophantine toolkit.
  std::string op;
  i64 A = 1, B = 1, C = 1, x = 10;
  u64 k = 1;
  u64 beta = 1, q = 1;
  i64 Q = 1;
  u64 b1 = 1, b2 = 1, b3 = 1;
  i64 X = 1;
  u64 M = 1;
  double eps = 0.0;
  unsigned level = 0;  // r in the L_r, q_r scales

  // Execution.
  unsigned threads = 1;
  u64 budget = 1'000'000'000;
  bool dry_run = false;
  OutputFormat format = OutputFormat::Csv;
  std::string out;

  unsigned n_single() const;
  std::pair<unsigned, unsigned> n_range() const;
  WeightSpec weight() const;
  ParallelPlan plan() const;
};

std::array<i64, 3> parse_coeffs(const std::string& text);
std::pair<unsigned, unsigned> parse_range(const std::string& text);
OutputFormat parse_format(const std::string& text);

// Reads a JSON object whose keys mirror the long flag names. Output-only
// fields of emitted rows are accepted and ignored, so a JSONL row can be fed
// back as a config. Unknown keys are rejected.
void load_config_file(const std::string& path, ExperimentConfig& cfg);
void load_config_json(const std::string& text, const std::string& origin, ExperimentConfig& cfg);

// CONIC_LAB_THREADS, if set, becomes the default worker count.
void apply_environment(ExperimentConfig& cfg);

}  // namespace conic_lab::cli
