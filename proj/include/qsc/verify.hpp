#pragma once

// Seeded randomized verification suites. Each instance yields one or more rows
// (lhs, rhs, margin = lhs - rhs); a suite passes when every margin clears its
// tolerance. Instance seeds are mix_seed(suite seed, instance id), so a row
// does not depend on the thread that computed it.

#include <cstdint>
#include <string>
#include <vector>

#include "qsc/parallel.hpp"

namespace qsc {

struct SweepRow {
  std::size_t instance_id = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool vacuous = false;
};

struct SuiteResult {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;
  double tolerance = 0.0;
  bool relative = false;      // judge margin / max(|lhs|, |rhs|) instead of margin
  double worst = 0.0;         // smallest (relative) margin over non-vacuous rows
  std::size_t violations = 0;
  bool pass = true;
};

const std::vector<std::string>& suite_names();
std::size_t default_instances(const std::string& suite);

// Unknown suite names raise ValidationError.
SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t instances,
                      Execution exec = Execution::parallel);

// CSV header and rows in the fixed column order instance_id, seed, params..., lhs, rhs, margin.
std::vector<std::string> csv_header(const SuiteResult& r);
std::vector<std::vector<std::string>> csv_rows(const SuiteResult& r);

}  // namespace qsc
