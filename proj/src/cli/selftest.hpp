#pragma once

#include "emit.hpp"

namespace conic_lab::cli {

struct SelftestResult {
  Table table;  // schema_version, check, status, detail
  bool passed = true;
};

// Small-size versions of the library invariants; seconds, single-threaded.
SelftestResult run_selftest(unsigned threads);

}  // namespace conic_lab::cli
