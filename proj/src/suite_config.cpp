#include "qcohom/suite_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qcohom/car_flow.hpp"

namespace qcohom {

namespace pt = boost::property_tree;

SuiteConfig default_config() {
  SuiteConfig c;
  c.inner.zeros = {Complex(0.3, 0.0), Complex(0.0, -0.4)};
  c.inner.spectrum = {std::polar(1.0, 0.5), std::polar(1.0, 1.5)};
  c.measure.atoms = {{0.25, 1.5}, {2.5, 0.5}};
  c.measure.grid_origin = -4.0;
  c.measure.grid_step = 0.5;
  c.measure.cell_densities = {0.2, 0.7, 0.1, 0.4, 0.9, 0.3};
  c.measure.lebesgue = 0.3;
  c.measure.counting = 1.0;
  return c;
}

namespace {

std::string trim(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  const auto v = trim(value);
  if (v.empty()) return parts;
  boost::algorithm::split(parts, v, boost::algorithm::is_any_of(","));
  for (auto& p : parts) {
    p = trim(p);
    if (p.empty()) throw ConfigError("empty entry in list '" + value + "'");
  }
  return parts;
}

double to_double(const std::string& s) {
  try {
    size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(x)) throw ConfigError("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
}

long long to_integer(const std::string& s) {
  try {
    size_t used = 0;
    const long long x = std::stoll(s, &used);
    if (used != s.size()) throw ConfigError("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
}

int to_int(const std::string& s) {
  const long long x = to_integer(s);
  if (x < -1000000 || x > 1000000) throw ConfigError("integer out of range: '" + s + "'");
  return static_cast<int>(x);
}

bool to_bool(const std::string& s) {
  const auto v = boost::algorithm::to_lower_copy(s);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::pair<double, double> to_pair(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("expected a:b, got '" + s + "'");
  return {to_double(trim(s.substr(0, colon))), to_double(trim(s.substr(colon + 1)))};
}

std::vector<double> doubles(const std::string& v) {
  std::vector<double> out;
  for (const auto& p : split_list(v)) out.push_back(to_double(p));
  return out;
}

std::vector<int> ints(const std::string& v) {
  std::vector<int> out;
  for (const auto& p : split_list(v)) out.push_back(to_int(p));
  return out;
}

std::vector<Complex> complexes(const std::string& v) {
  std::vector<Complex> out;
  for (const auto& p : split_list(v)) out.push_back(parse_complex(p));
  return out;
}

using Setter = std::function<void(SuiteConfig&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"run",
       {
           {"seed", [](SuiteConfig& c, const std::string& v) {
              const long long x = to_integer(v);
              if (x < 0) throw ConfigError("seed must be nonnegative");
              c.seed = static_cast<std::uint64_t>(x);
            }},
           {"tolerance", [](SuiteConfig& c, const std::string& v) { c.tolerance = to_double(v); }},
           {"findings", [](SuiteConfig& c, const std::string& v) { c.findings = to_bool(v); }},
           {"literal", [](SuiteConfig& c, const std::string& v) { c.literal = to_bool(v); }},
       }},
      {"inner",
       {
           {"phase", [](SuiteConfig& c, const std::string& v) { c.inner.phase = std::polar(1.0, to_double(v)); }},
           {"zeros", [](SuiteConfig& c, const std::string& v) { c.inner.zeros = complexes(v); }},
           {"spectrum", [](SuiteConfig& c, const std::string& v) { c.inner.spectrum = complexes(v); }},
           {"atoms", [](SuiteConfig& c, const std::string& v) {
              c.inner.atoms.clear();
              for (const auto& p : split_list(v)) {
                const auto [angle, mass] = to_pair(p);
                c.inner.atoms.push_back({angle, mass});
              }
            }},
       }},
      {"shift-cocycles",
       {
           {"windows", [](SuiteConfig& c, const std::string& v) { c.windows = ints(v); }},
           {"horizon", [](SuiteConfig& c, const std::string& v) { c.horizon = to_int(v); }},
           {"zeta_horizon", [](SuiteConfig& c, const std::string& v) { c.zeta_horizon = to_int(v); }},
           {"hs_truncations", [](SuiteConfig& c, const std::string& v) { c.hs_truncations = ints(v); }},
       }},
      {"cohomology",
       {
           {"tuples", [](SuiteConfig& c, const std::string& v) { c.tuples = to_int(v); }},
           {"window", [](SuiteConfig& c, const std::string& v) { c.lattice_window = to_int(v); }},
           {"atoms", [](SuiteConfig& c, const std::string& v) {
              c.measure.atoms.clear();
              for (const auto& p : split_list(v)) {
                const auto [pos, mass] = to_pair(p);
                c.measure.atoms.push_back({pos, mass});
              }
            }},
           {"grid_origin", [](SuiteConfig& c, const std::string& v) { c.measure.grid_origin = to_double(v); }},
           {"grid_step", [](SuiteConfig& c, const std::string& v) { c.measure.grid_step = to_double(v); }},
           {"densities", [](SuiteConfig& c, const std::string& v) { c.measure.cell_densities = doubles(v); }},
           {"lebesgue", [](SuiteConfig& c, const std::string& v) { c.measure.lebesgue = to_double(v); }},
           {"counting", [](SuiteConfig& c, const std::string& v) { c.measure.counting = to_double(v); }},
           {"base_points", [](SuiteConfig& c, const std::string& v) { c.base_points = doubles(v); }},
       }},
      {"car",
       {
           {"lo", [](SuiteConfig& c, const std::string& v) { c.car_lo = to_int(v); }},
           {"hi", [](SuiteConfig& c, const std::string& v) { c.car_hi = to_int(v); }},
       }},
      {"perturbation",
       {
           {"lo", [](SuiteConfig& c, const std::string& v) { c.pert_lo = to_int(v); }},
           {"hi", [](SuiteConfig& c, const std::string& v) { c.pert_hi = to_int(v); }},
           {"site", [](SuiteConfig& c, const std::string& v) { c.pert_site = to_int(v); }},
           {"theta", [](SuiteConfig& c, const std::string& v) { c.pert_theta = to_double(v); }},
           {"horizon", [](SuiteConfig& c, const std::string& v) { c.pert_horizon = to_int(v); }},
           {"powers_depth", [](SuiteConfig& c, const std::string& v) { c.powers_depth = to_int(v); }},
           {"samples", [](SuiteConfig& c, const std::string& v) { c.independence_samples = to_int(v); }},
       }},
  };
  return s;
}

}  // namespace

Complex parse_complex(const std::string& token) {
  const auto t = trim(token);
  if (t.empty()) throw ConfigError("empty complex number");
  if (t.front() == '@') return std::polar(1.0, to_double(trim(t.substr(1))));
  if (t.find(':') != std::string::npos) {
    const auto [re, im] = to_pair(t);
    return {re, im};
  }
  return {to_double(t), 0.0};
}

std::vector<Complex> parse_complex_list(const std::string& text) { return complexes(text); }

SuiteConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  SuiteConfig c = default_config();
  for (const auto& [section, body] : tree) {
    auto sec = schema().find(section);
    if (sec == schema().end()) throw ConfigError("unknown section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      auto it = sec->second.find(key);
      if (it == sec->second.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      try {
        it->second(c, trim(node.data()));
      } catch (const ConfigError& e) {
        throw ConfigError("[" + section + "] " + key + ": " + e.what());
      }
    }
  }
  validate(c);
  return c;
}

SuiteConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const SuiteConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(c.tolerance > 0.0, "tolerance must be positive");
  try {
    (void)c.inner.theta();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("inner function: ") + e.what());
  }
  need(c.inner.atoms.empty(), "singular atoms are truncation sensitive; the suites take Blaschke parts only");
  need(c.inner.spectrum.size() == c.inner.zeros.size(), "spectrum needs one eigenvalue per zero");
  for (const auto& l : c.inner.spectrum) need(std::abs(std::abs(l) - 1.0) < 1e-12, "spectrum values must be unimodular");
  need(!c.windows.empty(), "at least one window");
  for (int n : c.windows) {
    need(n >= 16 && n <= kMaxHalfWidth && n % 2 == 0,
         "window " + std::to_string(n) + " must be even and in [16, " + std::to_string(kMaxHalfWidth) + "]");
  }
  need(c.horizon >= 1 && c.horizon <= 16, "horizon must be in [1, 16]");
  need(c.zeta_horizon >= 1, "zeta_horizon must be positive");
  for (int t : c.hs_truncations) need(t > 0 && t % 2 == 0, "hs truncations must be positive and even");
  need(c.tuples >= 1 && c.tuples <= 100000, "tuples must be in [1, 100000]");
  need(c.lattice_window >= 16 && c.lattice_window <= kMaxHalfWidth, "cohomology window out of range");
  need(c.measure.grid_step > 0.0, "grid_step must be positive");
  need(!c.base_points.empty() && c.base_points.size() <= 4, "1 to 4 base points");
  need(c.car_hi >= 1 && c.car_lo <= 0, "car window must contain sites 0 and 1");
  need(c.car_hi - c.car_lo + 1 <= kMaxFermionSites, "car window exceeds the site cap");
  need(c.pert_hi - c.pert_lo + 1 <= kMaxFermionSites, "perturbation window exceeds the site cap");
  need(c.pert_lo <= c.pert_site && c.pert_site <= 0, "perturbation site must lie in the window at or below 0");
  need(c.pert_hi >= 1, "perturbation window must reach site 1");
  need(c.pert_lo <= -4, "perturbation window must reach site -4 for the conjugacy elements");
  need(c.pert_horizon >= 1, "perturbation horizon must be positive");
  need(c.powers_depth >= 1 && c.powers_depth <= 6, "powers_depth must be in [1, 6]");
  need(c.independence_samples >= 1, "samples must be positive");
}

}  // namespace qcohom
