#include "qsc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qsc/entropy.hpp"

namespace qsc {

InequalityMargin InequalityMargin::of(double lhs, double rhs, std::string digest) {
  InequalityMargin m;
  m.lhs = lhs;
  m.rhs = rhs;
  m.margin = lhs - rhs;
  m.instance_digest = std::move(digest);
  return m;
}

InequalityMargin InequalityMargin::vacuously_true(std::string digest) {
  InequalityMargin m;
  m.vacuous = true;
  m.instance_digest = std::move(digest);
  return m;
}

double InequalityMargin::relative() const {
  if (vacuous) return 0.0;
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return margin / scale;
}

void BoundReport::finalize() { total = first_order + second_order + third_order; }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TextReport::TextReport(std::string command, bool bits) : command_(std::move(command)), bits_(bits) {}

void TextReport::flag(const std::string& key, const std::string& value) { flags_.emplace_back(key, value); }

void TextReport::row(const std::string& name, double value, const std::string& unit) {
  if (unit == "nats" && bits_)
    rows_.push_back({name, std::isinf(value) ? value : value / kLn2, "bits"});
  else
    rows_.push_back({name, value, unit});
}

void TextReport::note(const std::string& text) { notes_.push_back(text); }

namespace {
// Constants measured in nats; the rest (eta, gamma, c, n, ...) are dimensionless.
bool is_entropic_constant(const std::string& k) {
  static const char* const names[] = {"A", "I(X;Y)", "K_eps", "K_source", "S(rho_Y)", "delta_n", "delta_star", "margin"};
  for (const char* n : names)
    if (k == n) return true;
  return false;
}
}  // namespace

void TextReport::bound(const BoundReport& b) {
  row(b.name + ".first_order", b.first_order);
  row(b.name + ".second_order", b.second_order);
  row(b.name + ".third_order", b.third_order);
  row(b.name + ".total", b.total);
  for (const auto& [k, v] : b.constants) row(b.name + ".const." + k, v, is_entropic_constant(k) ? "nats" : "1");
  for (const auto& [k, v] : b.witnesses) note(b.name + ".witness." + k + " = " + v);
}

void TextReport::margin(const std::string& prefix, const InequalityMargin& m, const std::string& unit) {
  if (m.vacuous) {
    note(prefix + " vacuous");
    return;
  }
  row(prefix + ".lhs", m.lhs, unit);
  row(prefix + ".rhs", m.rhs, unit);
  row(prefix + ".margin", m.margin, unit);
}

void TextReport::table(std::vector<std::string> header, std::vector<std::vector<std::string>> rows) {
  table_header_ = std::move(header);
  table_rows_ = std::move(rows);
}

void TextReport::write(std::ostream& os) const {
  os << "# command: " << command_ << "\n";
  os << "# units: " << (bits_ ? "bits" : "nats") << "\n";
  for (const auto& [k, v] : flags_) os << "# flag " << k << " = " << v << "\n";
  for (const auto& n : notes_) os << "# " << n << "\n";
  for (const auto& r : rows_) os << r.name << " " << fmt(r.value) << " " << r.unit << "\n";
  if (!table_header_.empty()) {
    os << "# csv\n";
    for (std::size_t i = 0; i < table_header_.size(); ++i) os << (i ? "," : "") << table_header_[i];
    os << "\n";
    for (const auto& r : table_rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
  }
}

}  // namespace qsc
