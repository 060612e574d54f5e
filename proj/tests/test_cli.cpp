#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/emit.hpp"
#include "conic_lab/cli.hpp"
#include "json.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"conic_lab"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = conic_lab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("conic_lab_test_" + name);
}

}  // namespace

TEST_CASE("count emits a versioned csv row") {
  const Result r = run({"count", "--p", "7", "--n", "1", "--coeffs", "1,1,-1", "--N", "3", "--sharp"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("schema_version,", 0) == 0);
  CHECK(rows[1].rfind("1,", 0) == 0);
  CHECK(rows[1].find(",24,") != std::string::npos);
}

TEST_CASE("smallest subcommand") {
  const Result r = run({"smallest", "--p", "7", "--n", "2", "--coeffs", "1,1,-1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("5,3,4,5") != std::string::npos);
}

TEST_CASE("validation errors exit with 2") {
  CHECK(run({"count", "--p", "9", "--n", "2", "--coeffs", "1,1,-1"}).code == 2);
  CHECK(run({"count", "--p", "7", "--n", "2", "--coeffs", "1,7,-1"}).code == 2);
  CHECK(run({"count", "--p", "7", "--n", "2", "--coeffs", "1,1"}).code == 2);
  CHECK(run({"scan", "--p", "7", "--n", "2..3", "--coeffs", "1,1,-1", "--theta", "0.3"}).code == 2);
  CHECK(run({"count", "--p", "7", "--n", "2", "--coeffs", "1,1,-1", "--format", "xml"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  const Result r = run({"count", "--p", "7", "--n", "2", "--coeffs", "1,1,-1", "--radius", "2"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("budget refusal and dry run") {
  const Result over = run({"scan", "--p", "7", "--n", "4..6", "--coeffs", "1,1,-1", "--budget", "1000"});
  CHECK(over.code == 2);
  CHECK(over.out.empty());
  const Result dry = run({"scan", "--p", "7", "--n", "4..6", "--coeffs", "1,1,-1", "--budget", "1000", "--dry-run"});
  CHECK(dry.code == 2);
  const auto rows = lines(dry.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "schema_version,subcommand,work_units,budget,within_budget");
  CHECK(rows[1].rfind("1,scan,", 0) == 0);
  CHECK(rows[1].find(",false") != std::string::npos);
  const Result fits = run({"scan", "--p", "7", "--n", "4..6", "--coeffs", "1,1,-1", "--dry-run"});
  CHECK(fits.code == 0);
  CHECK(lines(fits.out).at(1).find(",true") != std::string::npos);
}

TEST_CASE("jsonl rows feed back as configs") {
  const Result first = run({"count", "--p", "7", "--n", "2", "--coeffs", "3,5,-2", "--N", "12.5", "--format", "jsonl"});
  REQUIRE(first.code == 0);
  const auto rows = lines(first.out);
  REQUIRE(rows.size() == 1);
  const auto row = nlohmann::json::parse(rows[0]);
  CHECK(row["schema_version"] == 1);
  const auto path = temp_file("row.json");
  {
    std::ofstream f(path);
    f << rows[0];
  }
  const Result again = run({"count", "--config", path.string(), "--format", "jsonl"});
  std::filesystem::remove(path);
  CHECK(again.code == 0);
  CHECK(again.out == first.out);
}

TEST_CASE("unknown config keys are rejected") {
  const auto path = temp_file("bad.json");
  {
    std::ofstream f(path);
    f << R"({"p": 7, "n": "2", "coeffs": "1,1,-1", "colour": 3})";
  }
  const Result r = run({"count", "--config", path.string()});
  std::filesystem::remove(path);
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);
}

TEST_CASE("flags override config values") {
  const auto path = temp_file("cfg.json");
  {
    std::ofstream f(path);
    f << R"({"p": 5, "n": "2", "coeffs": "1,1,-1", "N": 10})";
  }
  const Result r = run({"count", "--config", path.string(), "--p", "7", "--sharp"});
  std::filesystem::remove(path);
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[1].rfind("1,7,2,49,", 0) == 0);
}

TEST_CASE("thread count does not change output") {
  const Result one = run({"scan", "--p", "7", "--n", "2..4", "--samples", "3", "--seed", "9", "--threads", "1"});
  const Result four = run({"scan", "--p", "7", "--n", "2..4", "--samples", "3", "--seed", "9", "--threads", "4"});
  REQUIRE(one.code == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("expsum-check and param-check succeed on consistent inputs") {
  CHECK(run({"expsum-check", "--p", "7", "--n", "3", "--coeffs", "1,1,-1", "--samples", "5"}).code == 0);
  CHECK(run({"param-check", "--p", "7", "--n", "2", "--coeffs", "1,2,3"}).code == 0);
}

TEST_CASE("dioph ops") {
  const Result eq = run({"dioph", "--op", "equation", "--A", "1", "--B", "1", "--C", "25", "--x", "5"});
  REQUIRE(eq.code == 0);
  CHECK(lines(eq.out)[1].find(",12") != std::string::npos);
  CHECK(run({"dioph", "--op", "approx", "--beta", "7", "--q", "10", "--Q", "3"}).code == 0);
  CHECK(run({"dioph", "--op", "bogus"}).code == 2);
}

TEST_CASE("unwritable output path") {
  CHECK(run({"count", "--p", "7", "--n", "1", "--coeffs", "1,1,-1", "--out", "/nonexistent/dir/x.csv"}).code == 2);
}

TEST_CASE("csv formatting") {
  using conic_lab::cli::format_double;
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(conic_lab::cli::to_csv_cell(conic_lab::cli::Field{std::string("a,b")}) == "\"a,b\"");
}

TEST_CASE("parse helpers") {
  CHECK(conic_lab::cli::parse_range("3..6") == std::pair<unsigned, unsigned>{3, 6});
  CHECK(conic_lab::cli::parse_range("4") == std::pair<unsigned, unsigned>{4, 4});
  CHECK_THROWS_AS(conic_lab::cli::parse_range("6..3"), conic_lab::cli::ConfigError);
  CHECK(conic_lab::cli::parse_coeffs("1, 2,-3") == std::array<conic_lab::i64, 3>{1, 2, -3});
  CHECK_THROWS_AS(conic_lab::cli::parse_coeffs("1,2"), conic_lab::cli::ConfigError);
}
