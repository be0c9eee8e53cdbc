// qcohom: run verification suites over a scenario config, or build one
// inner-function cocycle and print what came out.
//
// exit codes: 0 no failing check, 1 a check failed, 2 bad config or
// arguments, 3 window overflow.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qcohom/cocycle_lab.hpp"
#include "qcohom/suites.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;
constexpr int kWindowOverflow = 3;

void print_summary(const std::vector<qcohom::ReportRecord>& records) {
  int pass = 0, fail = 0, finding = 0;
  for (const auto& r : records) {
    switch (r.status) {
      case qcohom::Status::pass:
        ++pass;
        break;
      case qcohom::Status::fail:
        ++fail;
        std::cout << "FAIL     " << r.suite << " / " << r.check << "  residual " << r.residual << " > "
                  << r.tolerance << "  " << r.params.dump() << "\n";
        break;
      case qcohom::Status::finding:
        ++finding;
        std::cout << "FINDING  " << r.suite << " / " << r.check << "  residual " << r.residual << "  " << r.note
                  << "\n";
        break;
    }
  }
  std::cout << records.size() << " checks: " << pass << " pass, " << fail << " fail, " << finding << " findings\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcohom: cocycle and cohomology verification suites"};
  app.set_version_flag("--version", "qcohom 0.1.0");

  std::string suite = "all";
  std::string config_path;
  std::string out_dir = "qcohom-out";
  std::uint64_t seed = 42;
  int window = 0;
  bool literal = false;
  bool seed_given = false;

  app.add_option("--suite", suite, "shift-cocycles, cohomology, car, perturbation or all")->capture_default_str();
  app.add_option("--config", config_path, "scenario INI file (built-in default when omitted)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed for sampled checks (overrides the config)");
  app.add_option("--window", window, "single lattice window N for the shift-cocycle suite");
  app.add_flag("--literal-2-1", literal, "also build the unrepaired W_{-t} constructor and report it");

  auto* demo = app.add_subcommand("demo-inner", "build Theta, R and the cocycle and print a summary");
  std::string zeros_text;
  std::string spectrum_text;
  double phase = 0.0;
  int demo_window = 64;
  std::string demo_out;
  demo->add_option("--zeros", zeros_text, "zeros of Theta: re:im, re or @angle, comma separated");
  demo->add_option("--spectrum", spectrum_text, "eigenvalues of R on K_Theta, same syntax");
  demo->add_option("--phase", phase, "angle of the constant phase of Theta");
  demo->add_option("--window", demo_window, "lattice window N")->capture_default_str();
  demo->add_option("--out", demo_out, "write report, series and plots here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  seed_given = seed_opt->count() > 0;

  try {
    if (*demo) {
      qcohom::InnerScenario s;
      s.phase = std::polar(1.0, phase);
      s.zeros = qcohom::parse_complex_list(zeros_text);
      s.spectrum = qcohom::parse_complex_list(spectrum_text);
      if (s.spectrum.size() != s.zeros.size()) throw qcohom::ConfigError("need one spectrum value per zero");
      if (demo_window < 16 || demo_window > qcohom::kMaxHalfWidth || demo_window % 2 != 0) {
        throw qcohom::ConfigError("window must be even and in [16, 512]");
      }
      for (const auto& l : s.spectrum) {
        if (std::abs(std::abs(l) - 1.0) > 1e-12) throw qcohom::ConfigError("spectrum values must be unimodular");
      }
      auto d = qcohom::demo_inner(s, demo_window);
      std::cout << d.summary;
      if (!demo_out.empty()) qcohom::write_outputs(demo_out, d.output.records, d.output.series, d.output.plots);
      return qcohom::any_failure(d.output.records) ? kCheckFailed : kOk;
    }

    if (!qcohom::is_suite_name(suite)) throw qcohom::ConfigError("unknown suite '" + suite + "'");
    auto config = config_path.empty() ? qcohom::default_config() : qcohom::load_config(config_path);
    if (seed_given) config.seed = seed;
    if (window != 0) config.windows = {window};
    if (literal) config.literal = true;
    qcohom::validate(config);

    const auto out = qcohom::run_suite(suite, config);
    qcohom::write_outputs(out_dir, out.records, out.series, out.plots);
    print_summary(out.records);
    std::cout << "report: " << (std::filesystem::path(out_dir) / "report.jsonl").string() << "\n";
    return qcohom::any_failure(out.records) ? kCheckFailed : kOk;
  } catch (const qcohom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const qcohom::WindowOverflowError& e) {
    std::cerr << "window overflow: " << e.what() << "\n";
    return kWindowOverflow;
  }
}
