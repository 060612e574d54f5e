#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace conic_lab::cli {

constexpr int kSchemaVersion = 1;

// Empty (monostate) renders as an empty CSV cell and JSON null.
using Field = std::variant<std::monostate, std::int64_t, std::uint64_t, double, bool, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Field>> rows;

  void add(std::vector<Field> row);
};

// %.12g; integers print exactly.
std::string format_double(double v);
std::string to_csv_cell(const Field& f);
std::string to_json_value(const Field& f);

void emit(const Table& table, OutputFormat format, std::ostream& out);
// To cfg.out if set (error with path context on failure), else to `fallback`.
void emit_to(const Table& table, const ExperimentConfig& cfg, std::ostream& fallback);

}  // namespace conic_lab::cli
