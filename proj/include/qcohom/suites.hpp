#pragma once

// Named verification suites over the library modules. Each suite turns a
// scenario into report records plus data series and plots; nothing is
// written here.

#include <string>
#include <vector>

#include "qcohom/report.hpp"
#include "qcohom/suite_config.hpp"

namespace qcohom {

struct SuiteOutput {
  std::vector<ReportRecord> records;
  std::vector<Series> series;
  std::vector<Plot> plots;

  void append(SuiteOutput other);
};

/// shift-cocycles, cohomology, car, perturbation.
const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& name);

/// "all" runs every suite concurrently and concatenates them in the order of
/// suite_names(). Throws std::invalid_argument for an unknown name.
SuiteOutput run_suite(const std::string& name, const SuiteConfig& config);

SuiteOutput shift_cocycle_suite(const SuiteConfig& config);
SuiteOutput cohomology_suite(const SuiteConfig& config);
SuiteOutput car_suite(const SuiteConfig& config);
SuiteOutput perturbation_suite(const SuiteConfig& config);

/// Findings: printed claims recomputed on small fixed instances.
std::vector<ReportRecord> finding_records(double tolerance);
/// Unrepaired constructor on Theta = z, lambda = 1; norm of W_{-1} e_1 in params.
ReportRecord literal_constructor_record(int half_width);

struct InnerDemo {
  std::string summary;
  int model_dimension = 0;
  int defect_index = 0;
  std::vector<Complex> unitary_eigenvalues;
  double spectrum_mismatch = 0.0;  ///< max distance from a requested eigenvalue to the computed ones
  double identity_residual = 0.0;  ///< max_n ||W_{-n} - I||
  SuiteOutput output;
};

InnerDemo demo_inner(const InnerScenario& scenario, int half_width, double tolerance = kDefaultTolerance);

}  // namespace qcohom
