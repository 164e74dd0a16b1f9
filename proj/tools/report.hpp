#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakcr/fock_rep.hpp"

namespace weakcr::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;

enum class Relation { Below, AtLeast };

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::Below;
  bool pass = false;
};

struct Failure {
  std::string name;
  std::string message;
};

/// Flat table for CSV output; only scan commands fill it.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

class Report {
public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  Json& parameters() { return parameters_; }
  Json& tolerances() { return tolerances_; }
  Json& result() { return result_; }
  std::optional<Table>& table() { return table_; }

  /// Records value < threshold (Below) or value >= threshold (AtLeast).
  void check(std::string name, double value, double threshold, Relation rel = Relation::Below);
  void check_flag(std::string name, bool ok);
  void fail(std::string name, std::string message);
  void summary(std::string line) { summary_.push_back(std::move(line)); }

  bool pass() const;
  Json to_json() const;
  void write_text(std::ostream& os) const;
  /// Throws std::runtime_error when the command produced no table.
  void write_csv(std::ostream& os) const;

private:
  std::string command_;
  Json parameters_ = Json::object();
  Json tolerances_ = Json::object();
  Json result_ = Json::object();
  std::vector<Check> checks_;
  std::vector<Failure> failures_;
  std::vector<std::string> summary_;
  std::optional<Table> table_;
};

Json to_json(cplx z);
/// NaN and infinities become null.
Json number(double x);
/// %.17g, the form used in CSV cells and text summaries.
std::string fmt(double x);
std::string fmt_short(double x);

}  // namespace weakcr::cli
