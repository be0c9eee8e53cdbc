#pragma once

// Verification records, comma-separated series and small self-contained SVG
// plots. One record per check; a record is a JSON object on its own line.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qcohom {

enum class Status { pass, fail, finding };

std::string to_string(Status s);

struct ReportRecord {
  std::string suite;
  std::string check;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();  ///< key -> scalar or string
  double residual = 0.0;
  double tolerance = 0.0;
  Status status = Status::fail;
  std::string note;

  nlohmann::ordered_json to_json() const;
  static ReportRecord from_json(const nlohmann::ordered_json& j);
};

/// status = pass iff residual <= tolerance (NaN fails).
ReportRecord make_check(std::string suite, std::string check, nlohmann::ordered_json params, double residual,
                        double tolerance);

/// Checks whose printed claim disagrees with the computation. The residual
/// measures the disagreement; a record only becomes a finding when it exceeds
/// the tolerance, otherwise it passes like any other check.
const std::vector<std::string_view>& registered_findings();
bool is_registered_finding(std::string_view check);

/// Throws std::invalid_argument for an unregistered check name.
ReportRecord make_finding(std::string suite, std::string check, nlohmann::ordered_json params, double residual,
                          double tolerance, std::string note);

/// One JSON object per line, in record order.
std::string to_jsonl(const std::vector<ReportRecord>& records);
std::vector<ReportRecord> parse_jsonl(const std::string& text);

bool any_failure(const std::vector<ReportRecord>& records);

struct Series {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> rows;

  std::string to_csv() const;
};

struct Plot {
  std::string name;
  std::string svg;
};

/// Line plot; log_y plots log10 of the positive values and drops the rest.
Plot line_plot(const std::string& name, const std::string& title, const std::vector<Series>& series,
               bool log_y);

/// Points in the plane with the unit circle drawn behind them; the first
/// series is drawn as open circles, the second as filled dots.
Plot circle_plot(const std::string& name, const std::string& title, const std::vector<Series>& series);

/// Writes report.jsonl, series/<name>.csv and plots/<name>.svg under dir.
void write_outputs(const std::filesystem::path& dir, const std::vector<ReportRecord>& records,
                   const std::vector<Series>& series, const std::vector<Plot>& plots);

/// Shortest round-trip text for a double.
std::string format_number(double x);

}  // namespace qcohom
