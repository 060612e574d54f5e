#include "emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace conic_lab::cli {

void Table::add(std::vector<Field> row) {
  if (row.size() != header.size()) throw std::logic_error("row width does not match header");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string to_csv_cell(const Field& f) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char c : s) {
        if (c == '"') out += '"';
        out += c;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, f);
}

std::string to_json_value(const Field& f) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      if (!std::isfinite(v)) return "null";
      return format_double(v);
    }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
  };
  return std::visit(Visitor{}, f);
}

void emit(const Table& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << to_csv_cell(row[i]);
      out << '\n';
    }
  } else {
    for (const auto& row : table.rows) {
      out << '{';
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << nlohmann::json(table.header[i]).dump() << ':' << to_json_value(row[i]);
      }
      out << "}\n";
    }
  }
}

void emit_to(const Table& table, const ExperimentConfig& cfg, std::ostream& fallback) {
  if (cfg.out.empty()) {
    emit(table, cfg.format, fallback);
    fallback.flush();
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file " + cfg.out);
  emit(table, cfg.format, file);
  file.flush();
  if (!file) throw std::runtime_error("write failed for output file " + cfg.out);
}

}  // namespace conic_lab::cli
