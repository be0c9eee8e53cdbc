#include "qcohom/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcohom {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::finding:
      return "finding";
  }
  return "fail";
}

namespace {

Status parse_status(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "finding") return Status::finding;
  throw std::invalid_argument("unknown status '" + s + "'");
}

// NaN and infinities have no JSON literal; keep them readable as strings.
nlohmann::ordered_json number_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double number_from_json(const nlohmann::ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  throw std::invalid_argument("not a number: " + s);
}

void check_params(const nlohmann::ordered_json& params) {
  if (!params.is_object()) throw std::invalid_argument("record parameters must be an object");
  for (const auto& [key, value] : params.items()) {
    if (value.is_structured()) throw std::invalid_argument("parameter '" + key + "' is not a scalar");
  }
}

}  // namespace

nlohmann::ordered_json ReportRecord::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["check"] = check;
  j["params"] = params;
  j["residual"] = number_json(residual);
  j["tolerance"] = number_json(tolerance);
  j["status"] = to_string(status);
  if (!note.empty()) j["note"] = note;
  return j;
}

ReportRecord ReportRecord::from_json(const nlohmann::ordered_json& j) {
  ReportRecord r;
  r.suite = j.at("suite").get<std::string>();
  r.check = j.at("check").get<std::string>();
  r.params = j.at("params");
  r.residual = number_from_json(j.at("residual"));
  r.tolerance = number_from_json(j.at("tolerance"));
  r.status = parse_status(j.at("status").get<std::string>());
  if (j.contains("note")) r.note = j.at("note").get<std::string>();
  return r;
}

ReportRecord make_check(std::string suite, std::string check, nlohmann::ordered_json params, double residual,
                        double tolerance) {
  if (params.is_null()) params = nlohmann::ordered_json::object();
  check_params(params);
  ReportRecord r;
  r.suite = std::move(suite);
  r.check = std::move(check);
  r.params = std::move(params);
  r.residual = residual;
  r.tolerance = tolerance;
  r.status = residual <= tolerance ? Status::pass : Status::fail;
  return r;
}

const std::vector<std::string_view>& registered_findings() {
  static const std::vector<std::string_view> names = {
      "literal-constructor-unitarity",  // printed W_{-t} form is not unitary
      "chi-norm-constant",              // printed ||chi_t - chi_s|| has an extra factor 2
      "adjoint-identity-printed-form",  // printed W_{-t} = S_t W_t* S_{-t}
      "hs-example-entry-count",         // W_{-1} - I for Theta = z has 4 nonzero entries, not 3
      "phase-only-defect-index",        // a constant Theta still gives defect index 1
  };
  return names;
}

bool is_registered_finding(std::string_view check) {
  const auto& names = registered_findings();
  return std::find(names.begin(), names.end(), check) != names.end();
}

ReportRecord make_finding(std::string suite, std::string check, nlohmann::ordered_json params, double residual,
                          double tolerance, std::string note) {
  if (!is_registered_finding(check)) throw std::invalid_argument("'" + check + "' is not a registered finding");
  auto r = make_check(std::move(suite), std::move(check), std::move(params), residual, tolerance);
  if (r.status == Status::fail) r.status = Status::finding;
  r.note = std::move(note);
  return r;
}

std::string to_jsonl(const std::vector<ReportRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.to_json().dump();
    out += '\n';
  }
  return out;
}

std::vector<ReportRecord> parse_jsonl(const std::string& text) {
  std::vector<ReportRecord> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(ReportRecord::from_json(nlohmann::ordered_json::parse(line)));
  }
  return out;
}

bool any_failure(const std::vector<ReportRecord>& records) {
  return std::any_of(records.begin(), records.end(), [](const ReportRecord& r) { return r.status == Status::fail; });
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string Series::to_csv() const {
  std::string out = x_label + "," + y_label + "\n";
  for (const auto& [x, y] : rows) out += format_number(x) + "," + format_number(y) + "\n";
  return out;
}

// ------------------------------------------------------------------- svg

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const std::array<const char*, 6> kColors = {"#1f4e79", "#c0392b", "#27864a", "#8e44ad", "#d68910", "#566573"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// "--" is not allowed inside an XML comment.
std::string comment_safe(std::string s) {
  for (size_t i = s.find("--"); i != std::string::npos; i = s.find("--")) s.replace(i, 2, "- ");
  return s;
}

std::string fixed(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << x;
  return os.str();
}

std::string tick(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void pad(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
    return;
  }
  const double m = 0.05 * (hi - lo);
  lo -= m;
  hi += m;
}

std::string header(const std::string& title, const std::vector<Series>& series) {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" +
                    fixed(kHeight) + "\" viewBox=\"0 0 " + fixed(kWidth) + " " + fixed(kHeight) + "\">\n";
  for (const auto& s : series) {
    out += "<!-- data " + comment_safe(s.name) + " (" + comment_safe(s.x_label) + ", " +
           comment_safe(s.y_label) + "):";
    for (const auto& [x, y] : s.rows) out += " " + format_number(x) + "," + format_number(y);
    out += " -->\n";
  }
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + escape(title) + "</text>\n";
  return out;
}

std::string axes(const Frame& f, const std::string& x_label, const std::string& y_label) {
  std::string out;
  const double l = f.px(f.x0), r = f.px(f.x1), b = f.py(f.y0), t = f.py(f.y1);
  out += "<rect x=\"" + fixed(l) + "\" y=\"" + fixed(t) + "\" width=\"" + fixed(r - l) + "\" height=\"" +
         fixed(b - t) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
    out += "<text x=\"" + fixed(f.px(x)) + "\" y=\"" + fixed(b + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick(x) + "</text>\n";
    out += "<text x=\"" + fixed(l - 6) + "\" y=\"" + fixed(f.py(y) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick(y) + "</text>\n";
  }
  out += "<text x=\"" + fixed((l + r) / 2) + "\" y=\"" + fixed(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(x_label) + "</text>\n";
  out += "<text transform=\"translate(16 " + fixed((t + b) / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(y_label) +
         "</text>\n";
  return out;
}

std::string legend(const std::vector<Series>& series) {
  std::string out;
  for (size_t i = 0; i < series.size(); ++i) {
    const double y = kTop + 14.0 + 16.0 * static_cast<double>(i);
    out += "<text x=\"" + fixed(kWidth - kRight - 8) + "\" y=\"" + fixed(y) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
           kColors[i % kColors.size()] + "\">" + escape(series[i].name) + "</text>\n";
  }
  return out;
}

}  // namespace

Plot line_plot(const std::string& name, const std::string& title, const std::vector<Series>& series, bool log_y) {
  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (size_t i = 0; i < series.size(); ++i) {
    for (auto [x, y] : series[i].rows) {
      if (log_y) {
        if (!(y > 0)) continue;
        y = std::log10(y);
      }
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      pts[i].emplace_back(x, y);
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  pad(x0, x1);
  pad(y0, y1);
  const Frame f{x0, x1, y0, y1};

  std::string y_label = series.empty() ? "" : series.front().y_label;
  if (log_y) y_label = "log10 " + y_label;
  std::string svg = header(title, series);
  svg += axes(f, series.empty() ? "" : series.front().x_label, y_label);
  for (size_t i = 0; i < pts.size(); ++i) {
    const char* color = kColors[i % kColors.size()];
    std::string line;
    for (const auto& [x, y] : pts[i]) line += fixed(f.px(x)) + "," + fixed(f.py(y)) + " ";
    if (!line.empty()) {
      line.pop_back();
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + line +
             "\"/>\n";
    }
    for (const auto& [x, y] : pts[i]) {
      svg += "<circle cx=\"" + fixed(f.px(x)) + "\" cy=\"" + fixed(f.py(y)) + "\" r=\"2.5\" fill=\"" + color +
             "\"/>\n";
    }
  }
  svg += legend(series);
  svg += "</svg>\n";
  return {name, svg};
}

Plot circle_plot(const std::string& name, const std::string& title, const std::vector<Series>& series) {
  const Frame f{-1.25, 1.25, -1.25, 1.25};
  std::string svg = header(title, series);
  svg += axes(f, "Re", "Im");
  const double cx = f.px(0.0), cy = f.py(0.0);
  svg += "<ellipse cx=\"" + fixed(cx) + "\" cy=\"" + fixed(cy) + "\" rx=\"" + fixed(f.px(1.0) - cx) + "\" ry=\"" +
         fixed(cy - f.py(1.0)) + "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  for (size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % kColors.size()];
    for (const auto& [x, y] : series[i].rows) {
      if (i == 0) {
        svg += "<circle cx=\"" + fixed(f.px(x)) + "\" cy=\"" + fixed(f.py(y)) + "\" r=\"7\" fill=\"none\" stroke=\"" +
               color + "\" stroke-width=\"1.5\"/>\n";
      } else {
        svg += "<circle cx=\"" + fixed(f.px(x)) + "\" cy=\"" + fixed(f.py(y)) + "\" r=\"3\" fill=\"" + color +
               "\"/>\n";
      }
    }
  }
  svg += legend(series);
  svg += "</svg>\n";
  return {name, svg};
}

void write_outputs(const std::filesystem::path& dir, const std::vector<ReportRecord>& records,
                   const std::vector<Series>& series, const std::vector<Plot>& plots) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  };
  write(dir / "report.jsonl", to_jsonl(records));
  if (!series.empty()) {
    fs::create_directories(dir / "series");
    for (const auto& s : series) write(dir / "series" / (s.name + ".csv"), s.to_csv());
  }
  if (!plots.empty()) {
    fs::create_directories(dir / "plots");
    for (const auto& p : plots) write(dir / "plots" / (p.name + ".svg"), p.svg);
  }
}

}  // namespace qcohom
