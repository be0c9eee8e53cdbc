#pragma once

// Scenario configuration for the verification suites: a flat INI file with
// one section per module. Every key is optional; unknown keys are errors.
//
//   [run]            seed, tolerance, findings
//   [inner]          phase (angle), zeros, atoms, spectrum
//   [shift-cocycles] windows, horizon, zeta_horizon, hs_truncations
//   [cohomology]     tuples, window, atoms, grid_origin, grid_step, densities,
//                    lebesgue, counting, base_points
//   [car]            lo, hi
//   [perturbation]   lo, hi, site, theta, horizon, powers_depth, samples
//
// Complex numbers are written re:im, re, or @angle for e^{i angle}; lists are
// comma separated; atoms are position:mass (angle:mass in [inner]).

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcohom/cohomology_ring.hpp"
#include "qcohom/inner_functions.hpp"

namespace qcohom {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxHalfWidth = 512;

struct InnerScenario {
  Complex phase{1.0, 0.0};
  std::vector<Complex> zeros;
  std::vector<SingularAtom> atoms;
  std::vector<Complex> spectrum;  ///< eigenvalues of R on K_Theta

  InnerFunction theta() const { return InnerFunction(phase, zeros, atoms); }
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  double tolerance = 1e-10;
  bool findings = true;
  bool literal = false;  ///< also build the unrepaired constructor and report it

  InnerScenario inner;
  std::vector<int> windows{64, 128};
  int horizon = 6;
  int zeta_horizon = 40;
  std::vector<int> hs_truncations;  ///< empty: powers of two up to 2N

  int tuples = 200;
  int lattice_window = 64;
  Measure measure;
  std::vector<double> base_points{0.0, 0.5, 1.25};

  int car_lo = -5;
  int car_hi = 6;

  int pert_lo = -7;
  int pert_hi = 3;
  int pert_site = 0;
  double pert_theta = 1.5707963267948966;
  int pert_horizon = 8;
  int powers_depth = 6;
  int independence_samples = 40;
};

/// Built-in scenario: degree-2 Blaschke product, mixed measure.
SuiteConfig default_config();

/// Parses INI text on top of default_config(); throws ConfigError.
SuiteConfig parse_config(const std::string& text);
SuiteConfig load_config(const std::filesystem::path& path);

/// Range checks against the module caps; throws ConfigError.
void validate(const SuiteConfig& config);

Complex parse_complex(const std::string& token);
/// Comma-separated complex numbers; empty text gives an empty list.
std::vector<Complex> parse_complex_list(const std::string& text);

}  // namespace qcohom
