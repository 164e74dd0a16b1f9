#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace weakcr::cli {

void Report::check(std::string name, double value, double threshold, Relation rel) {
  const bool ok = std::isfinite(value) &&
                  (rel == Relation::Below ? value < threshold : value >= threshold);
  checks_.push_back({std::move(name), value, threshold, rel, ok});
}

void Report::check_flag(std::string name, bool ok) {
  checks_.push_back({std::move(name), ok ? 1.0 : 0.0, 1.0, Relation::AtLeast, ok});
}

void Report::fail(std::string name, std::string message) {
  failures_.push_back({std::move(name), std::move(message)});
}

bool Report::pass() const {
  if (!failures_.empty()) return false;
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

Json Report::to_json() const {
  Json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["command"] = command_;
  j["parameters"] = parameters_;
  j["tolerances"] = tolerances_;
  j["result"] = result_;
  Json checks = Json::array();
  Json failures = Json::array();
  for (const auto& c : checks_) {
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"relation", c.relation == Relation::Below ? "<" : ">="},
                      {"threshold", number(c.threshold)},
                      {"pass", c.pass}});
    if (!c.pass) {
      failures.push_back({{"name", c.name},
                          {"message", "value " + fmt_short(c.value) +
                                          (c.relation == Relation::Below ? " not < " : " not >= ") +
                                          fmt_short(c.threshold)}});
    }
  }
  for (const auto& f : failures_) failures.push_back({{"name", f.name}, {"message", f.message}});
  j["checks"] = checks;
  j["pass"] = pass();
  j["failures"] = failures;
  return j;
}

void Report::write_text(std::ostream& os) const {
  for (const auto& line : summary_) os << line << '\n';
  for (const auto& c : checks_) {
    os << (c.pass ? "  ok    " : "  FAIL  ") << c.name << ": " << fmt_short(c.value)
       << (c.relation == Relation::Below ? " < " : " >= ") << fmt_short(c.threshold) << '\n';
  }
  for (const auto& f : failures_) os << "  FAIL  " << f.name << ": " << f.message << '\n';
  os << (pass() ? "PASS" : "FAIL") << '\n';
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void Report::write_csv(std::ostream& os) const {
  if (!table_) throw std::runtime_error("CSV output is only available for scan tables");
  auto row_out = [&os](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << csv_cell(row[i]);
    }
    os << '\n';
  };
  row_out(table_->header);
  for (const auto& r : table_->rows) row_out(r);
}

Json to_json(cplx z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace weakcr::cli
