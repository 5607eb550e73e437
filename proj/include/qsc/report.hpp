#pragma once

// Result carriers shared by the verifiers, the bound evaluators and the CLI.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qsc {

// lhs - rhs of an inequality lhs >= rhs.
struct InequalityMargin {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string instance_digest;
  bool vacuous = false;  // the inequality holds trivially (e.g. an undefined log-probability)

  static InequalityMargin of(double lhs, double rhs, std::string digest = {});
  static InequalityMargin vacuously_true(std::string digest = {});
  // margin / max(|lhs|, |rhs|, 1e-300)
  double relative() const;
};

struct BoundReport {
  std::string name;
  double first_order = 0.0;
  double second_order = 0.0;
  double third_order = 0.0;
  double total = 0.0;
  std::map<std::string, double> constants;
  std::map<std::string, std::string> witnesses;

  // total := first + second + third
  void finalize();
};

// Fixed-format double (%.17g), the only float formatting used in reports.
std::string fmt(double v);

struct ReportRow {
  std::string name;
  double value;
  std::string unit;  // "nats", "bits", "1" (dimensionless) or "count"
};

// Plain-text report: a header with the flag state, then one "name value unit"
// row per quantity. Entropic rows (unit "nats") are converted when bits is set.
class TextReport {
 public:
  TextReport(std::string command, bool bits);
  void flag(const std::string& key, const std::string& value);
  void row(const std::string& name, double value, const std::string& unit = "nats");
  void note(const std::string& text);
  void bound(const BoundReport& b);
  void margin(const std::string& prefix, const InequalityMargin& m, const std::string& unit = "nats");
  void table(std::vector<std::string> header, std::vector<std::vector<std::string>> rows);
  void write(std::ostream& os) const;

 private:
  std::string command_;
  bool bits_;
  std::vector<std::pair<std::string, std::string>> flags_;
  std::vector<ReportRow> rows_;
  std::vector<std::string> notes_;
  std::vector<std::string> table_header_;
  std::vector<std::vector<std::string>> table_rows_;
};

}  // namespace qsc
