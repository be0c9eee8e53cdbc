#include "qcohom/suites.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <random>
#include <sstream>

#include "qcohom/car_flow.hpp"
#include "qcohom/cocycle_lab.hpp"
#include "qcohom/cohomology_ring.hpp"
#include "qcohom/kflow_perturbation.hpp"

namespace qcohom {

using json = nlohmann::ordered_json;

void SuiteOutput::append(SuiteOutput other) {
  for (auto& r : other.records) records.push_back(std::move(r));
  for (auto& s : other.series) series.push_back(std::move(s));
  for (auto& p : other.plots) plots.push_back(std::move(p));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"shift-cocycles", "cohomology", "car", "perturbation"};
  return names;
}

bool is_suite_name(const std::string& name) {
  const auto& n = suite_names();
  return name == "all" || std::find(n.begin(), n.end(), name) != n.end();
}

namespace {

std::string complex_text(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string theta_label(const InnerScenario& s) {
  std::string out = "phase " + complex_text(s.phase) + "; zeros [";
  for (size_t i = 0; i < s.zeros.size(); ++i) out += (i ? ", " : "") + complex_text(s.zeros[i]);
  return out + "]";
}

// 0 when the negative control fires, 1 when it stays silent.
double control_residual(double observed, double floor) { return observed > floor ? 0.0 : 1.0; }

double spectrum_mismatch(const std::vector<Complex>& wanted, const Eigen::VectorXcd& got) {
  double worst = std::abs(static_cast<double>(got.size()) - static_cast<double>(wanted.size()));
  for (const auto& l : wanted) {
    double best = INFINITY;
    for (Eigen::Index i = 0; i < got.size(); ++i) best = std::min(best, std::abs(got[i] - l));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<int> default_truncations(int half_width) {
  std::vector<int> out;
  for (int t = 8; t <= 2 * half_width; t *= 2) out.push_back(t);
  return out;
}

struct InnerAnalysis {
  SuiteOutput out;
  int dimension = 0;
  int defect_index = 0;
  Eigen::VectorXcd eigenvalues;
  double mismatch = 0.0;
  double identity_residual = 0.0;
};

struct InnerOptions {
  std::string suite;
  int horizon = 6;
  int zeta_horizon = 40;
  double tolerance = kDefaultTolerance;
  std::vector<int> truncations;
  bool limit = true;
  bool plots = true;
};

InnerAnalysis analyze_inner(const InnerScenario& scenario, int half, const InnerOptions& opt) {
  InnerAnalysis a;
  auto& rec = a.out.records;
  const double tol = opt.tolerance;
  const auto theta = scenario.theta();
  const std::string label = theta_label(scenario);
  auto params = [&](json extra = json::object()) {
    json p;
    p["window"] = half;
    p["theta"] = label;
    for (const auto& [k, v] : extra.items()) p[k] = v;
    return p;
  };

  const ModelSpace space = model_space(theta, half);
  a.dimension = space.dimension();
  rec.push_back(make_check(opt.suite, "model-space-dimension", params({{"dimension", a.dimension}}),
                           std::abs(a.dimension - theta.blaschke_degree()), 0.0));
  rec.push_back(make_check(opt.suite, "model-space-truncation", params(), space.truncation_defect, tol));

  const ModelSpaceUnitary r(space, scenario.spectrum);
  const auto w = markovian_from_inner(r, opt.horizon);
  const auto cr = verify_cocycle(w, opt.horizon);
  const json hp = params({{"horizon", opt.horizon}});
  rec.push_back(make_check(opt.suite, "cocycle-identity", hp, cr.cocycle_residual, tol));
  rec.push_back(make_check(opt.suite, "adjoint-identity", hp, cr.adjoint_residual, tol));
  rec.push_back(make_check(opt.suite, "unitarity", hp, cr.unitarity_residual, tol));
  rec.push_back(make_check(opt.suite, "identity-at-zero", hp, cr.identity_at_zero, tol));
  const auto mr = verify_markovian(w, opt.horizon);
  rec.push_back(make_check(opt.suite, "markovian", hp, mr.residual(), tol));

  for (int n = 1; n <= opt.horizon; ++n) {
    a.identity_residual = std::max(a.identity_residual, max_abs(w.at(-n) - Matrix::Identity(2 * half, 2 * half)));
  }

  const auto certified = w.certify_markovian(tol);
  const auto v = associated_isometry(certified);
  rec.push_back(make_check(opt.suite, "isometry-interior", params(), v.interior_isometry_defect, tol));
  rec.push_back(make_check(opt.suite, "isometry-semigroup", params(), v.semigroup_residual, tol));
  rec.push_back(make_check(opt.suite, "isometry-leakage", params(), v.leakage, tol));

  const auto wold = wold_decompose(v);
  a.defect_index = wold.defect_index;
  a.eigenvalues = wold.unitary_eigenvalues;
  rec.push_back(make_check(opt.suite, "defect-index",
                           params({{"defect_index", wold.defect_index},
                                   {"boundary_modes", wold.boundary_modes},
                                   {"stabilized_at", wold.stabilized_at}}),
                           std::abs(wold.defect_index - 1), 0.0));
  rec.push_back(make_check(opt.suite, "defect-index-rank", params({{"rank_defect_index", wold.rank_defect_index}}),
                           std::abs(wold.rank_defect_index - 1), 0.0));
  rec.push_back(make_check(opt.suite, "wold-orthogonality", params(), wold.mutual_orthogonality, 1e-9));
  rec.push_back(make_check(opt.suite, "wold-unitary-invariance", params(), wold.unitary_invariance, 1e-9));
  rec.push_back(make_check(opt.suite, "wold-shift-invariance", params(), wold.shift_invariance, 1e-9));
  rec.push_back(make_check(opt.suite, "wold-shift-orthonormal", params(), wold.shift_forward, 1e-9));
  a.mismatch = spectrum_mismatch(scenario.spectrum, wold.unitary_eigenvalues);
  rec.push_back(make_check(opt.suite, "unitary-part-spectrum",
                           params({{"requested", static_cast<int>(scenario.spectrum.size())},
                                   {"computed", static_cast<int>(wold.unitary_eigenvalues.size())}}),
                           a.mismatch, 1e-9));

  if (opt.limit) {
    const auto limit = limit_cocycle(certified);
    const Matrix m = toeplitz_multiplier(theta, half).op.matrix();
    rec.push_back(make_check(opt.suite, "limit-stabilization", params({{"steps", limit.steps_checked}}),
                             limit.stabilization_residual, tol));
    rec.push_back(make_check(opt.suite, "limit-equals-multiplier", params(), max_abs(limit.limit.matrix() - m), tol));
    rec.push_back(make_check(opt.suite, "limit-range", params(), limit.range_residual, 1e-9));
  }

  const int zh = std::min(opt.zeta_horizon, half / 2 - 1);
  const auto zx = zeta_xi(certified, zh);
  const json zp = params({{"horizon", zh}, {"tail_bound", zx.tail_bound}});
  rec.push_back(make_check(opt.suite, "zeta-additive", zp, zx.additive_residual, tol));
  rec.push_back(make_check(opt.suite, "zeta-orthogonality", zp, zx.orthogonality_residual, tol));
  // xi is cut off at the horizon; small windows cannot reach e^{-40}
  rec.push_back(make_check(opt.suite, "xi-eigenvector", zp, zx.eigen_residual, std::max(1e-8, zx.tail_bound)));

  const auto truncations = opt.truncations.empty() ? default_truncations(half) : opt.truncations;
  const auto hs = hs_distance(w, -1, truncations);
  double jump = 0.0;
  for (size_t i = 1; i < hs.increments.size(); ++i) jump = std::max(jump, hs.increments[i] - hs.increments[i - 1]);
  const json sp = params({{"n", -1}, {"last_truncation", truncations.back()}});
  rec.push_back(make_check(opt.suite, "hs-cauchy", sp, hs.increments.empty() ? 0.0 : hs.increments.back(),
                           kHsCauchyThreshold));
  rec.push_back(make_check(opt.suite, "hs-monotone-increments", sp, std::max(0.0, jump), 1e-15));

  const std::string tag = "N" + std::to_string(half);
  Series values{"hs_values_" + tag, "truncation", "hs_norm", {}};
  Series incs{"hs_increments_" + tag, "truncation", "increment", {}};
  for (size_t i = 0; i < hs.values.size(); ++i) {
    values.rows.emplace_back(hs.truncations[i], hs.values[i]);
    if (i > 0) incs.rows.emplace_back(hs.truncations[i], hs.increments[i - 1]);
  }
  Series defect{"defect_spectrum_" + tag, "index", "eigenvalue", {}};
  for (Eigen::Index i = 0; i < wold.defect_spectrum.size(); ++i) {
    defect.rows.emplace_back(static_cast<double>(i), wold.defect_spectrum[i]);
  }
  Series requested{"requested_spectrum_" + tag, "re", "im", {}};
  for (const auto& l : scenario.spectrum) requested.rows.emplace_back(l.real(), l.imag());
  Series computed{"unitary_eigenvalues_" + tag, "re", "im", {}};
  for (Eigen::Index i = 0; i < wold.unitary_eigenvalues.size(); ++i) {
    computed.rows.emplace_back(wold.unitary_eigenvalues[i].real(), wold.unitary_eigenvalues[i].imag());
  }
  if (opt.plots) {
    a.out.plots.push_back(line_plot("hs_convergence_" + tag, "Hilbert-Schmidt increments, window " + tag, {incs}, true));
    a.out.plots.push_back(line_plot("defect_spectrum_" + tag, "Spectrum of I - VV*, window " + tag, {defect}, false));
    a.out.plots.push_back(circle_plot("unitary_ring_" + tag, "Unitary part: requested vs computed", {requested, computed}));
  }
  a.out.series = {values, incs, defect, requested, computed};
  return a;
}

MultiplicativeCocycle theta_z(int half, Complex lambda, int horizon, ConstructorForm form = ConstructorForm::corrected) {
  return markovian_from_inner(ModelSpaceUnitary(model_space(InnerFunction::identity(), half), {lambda}), horizon, form);
}

}  // namespace

ReportRecord literal_constructor_record(int half) {
  const auto w = theta_z(half, 1.0, 1, ConstructorForm::literal);
  const double norm = w.at(-1).col(half + 1).norm();
  return make_finding("shift-cocycles", "literal-constructor-unitarity",
                      json{{"window", half}, {"theta", "z"}, {"lambda", 1}, {"norm_W-1_e1", norm},
                           {"sqrt2_gap", std::abs(norm - std::sqrt(2.0))}},
                      std::abs(norm - 1.0), kDefaultTolerance,
                      "unrepaired constructor maps e_1 to lambda e_0 + e_1; not unitary");
}

std::vector<ReportRecord> finding_records(double tol) {
  std::vector<ReportRecord> out;
  const int half = 64;

  double worst = 0.0;
  double ratio = 0.0;
  for (auto [t, s] : {std::pair{3, 1}, std::pair{5, -2}, std::pair{0, 4}, std::pair{-6, 7}}) {
    const double computed = (chi(half, t) - chi(half, s)).norm();
    const double printed = 2.0 * std::sqrt(std::abs(t - s));
    worst = std::max(worst, std::abs(computed - printed));
    ratio = printed / computed;
  }
  out.push_back(make_finding("shift-cocycles", "chi-norm-constant", json{{"window", half}, {"printed_over_computed", ratio}},
                             worst, tol, "indicator norm is |t-s|^(1/2); the printed constant carries an extra 2"));

  {
    const auto w = theta_z(half, std::polar(1.0, 0.9), 3);
    const int radius = check_radius(half);
    double residual = 0.0;
    for (int n = 1; n <= 3; ++n) {
      const Matrix printed = conjugate_by_shift(w.at(n).adjoint(), half, n);
      const Matrix diff = w.at(-n) - printed;
      residual = std::max(residual, max_abs(diff.block(half - radius, half - radius, 2 * radius, 2 * radius)));
    }
    out.push_back(make_finding("shift-cocycles", "adjoint-identity-printed-form", json{{"window", half}, {"theta", "z"}},
                               residual, tol, "the cocycle identity forces W_{-t} = S_{-t} W_t* S_t"));
  }

  {
    const auto w = theta_z(half, 1.0, 1);
    const Matrix diff = w.at(-1) - Matrix::Identity(2 * half, 2 * half);
    int count = 0;
    for (Eigen::Index i = 0; i < diff.size(); ++i) count += std::abs(diff.data()[i]) > 1e-14 ? 1 : 0;
    out.push_back(make_finding("shift-cocycles", "hs-example-entry-count",
                               json{{"window", half}, {"theta", "z"}, {"lambda", 1}, {"nonzero", count},
                                    {"frobenius", diff.norm()}},
                               std::abs(count - 3), 0.0, "two diagonal deficits and two unit off-diagonal entries"));
  }

  {
    InnerScenario phase;
    phase.phase = std::polar(1.0, 0.3);
    const auto w = markovian_from_inner(ModelSpaceUnitary(model_space(phase.theta(), half), {}), 2);
    const auto wold = wold_decompose(associated_isometry(w.certify_markovian()));
    out.push_back(make_finding("shift-cocycles", "phase-only-defect-index",
                               json{{"window", half}, {"theta", "phase 0.3 rad"}, {"defect_index", wold.defect_index},
                                    {"claimed", 0}},
                               std::abs(wold.defect_index - 0), 0.0,
                               "V = W_{-1} S_{-1} maps H_0 onto H_1 for every markovian W, so the defect is 1"));
  }
  return out;
}

SuiteOutput shift_cocycle_suite(const SuiteConfig& config) {
  SuiteOutput out;
  const std::string suite = "shift-cocycles";
  InnerOptions opt;
  opt.suite = suite;
  opt.horizon = config.horizon;
  opt.zeta_horizon = config.zeta_horizon;
  opt.tolerance = config.tolerance;
  const int largest = *std::max_element(config.windows.begin(), config.windows.end());
  for (int half : config.windows) {
    opt.limit = half <= 128;  // W_{-n} for every n <= N; cubic per step
    opt.plots = half == largest;
    opt.truncations = half == largest ? config.hs_truncations : std::vector<int>{};
    auto a = analyze_inner(config.inner, half, opt);
    if (half != largest) a.out.series.clear();
    out.append(std::move(a.out));

    // right shift from the trivial cocycle
    const auto wold = wold_decompose(associated_isometry(trivial_cocycle(half, 2).certify_markovian()));
    out.records.push_back(make_check(suite, "trivial-defect-index", json{{"window", half}, {"defect_index", wold.defect_index}},
                                     std::abs(wold.defect_index - 1), 0.0));

    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(half));
    const auto j = random_local_unitary(half, 8, rng);
    const auto cob = coboundary_cocycle(j, config.horizon);
    const auto cr = verify_cocycle(cob, config.horizon);
    const json cp{{"window", half}, {"block", 8}, {"seed", config.seed}};
    out.records.push_back(make_check(suite, "coboundary-cocycle-identity", cp, cr.cocycle_residual, config.tolerance));
    out.records.push_back(make_check(suite, "coboundary-unitarity", cp, cr.unitarity_residual, config.tolerance));
    out.records.push_back(make_check(suite, "coboundary-triviality", cp, coboundary_triviality(cob, j, config.horizon),
                                     config.tolerance));
    const double nm = verify_markovian(cob, config.horizon).residual();
    json np = cp;
    np["markovian_residual"] = nm;
    out.records.push_back(make_check(suite, "coboundary-non-markovian-detected", np, control_residual(nm, 1e-2), 0.0));
  }

  double chi_worst = 0.0;
  double chi_add = 0.0;
  const int half = config.windows.front();
  for (int t = -5; t <= 5; ++t) {
    for (int s = -5; s <= 5; ++s) {
      chi_worst = std::max(chi_worst, std::abs((chi(half, t) - chi(half, s)).norm() - std::sqrt(std::abs(t - s))));
      if (std::abs(t + s) <= 10) {
        const auto lhs = chi(half, t + s);
        const auto rhs = chi(half, t) + shift(chi(half, s), t);
        chi_add = std::max(chi_add, (lhs - rhs).norm());
      }
    }
  }
  out.records.push_back(make_check(suite, "chi-norm", json{{"window", half}}, chi_worst, config.tolerance));
  out.records.push_back(make_check(suite, "chi-additive", json{{"window", half}}, chi_add, config.tolerance));

  if (config.findings) {
    for (auto& r : finding_records(config.tolerance)) out.records.push_back(std::move(r));
  }
  if (config.literal) out.records.push_back(literal_constructor_record(config.windows.front()));
  return out;
}

SuiteOutput cohomology_suite(const SuiteConfig& config) {
  SuiteOutput out;
  const std::string suite = "cohomology";
  const double tol = config.tolerance;
  std::mt19937_64 rng(config.seed + 1);
  const auto module =
      std::make_shared<const ScalarFieldModule>(std::vector<double>{-2.5, -1.0, 0.0, 0.25, 1.75, 3.0});

  for (int degree = 1; degree <= 3; ++degree) {
    const auto y = random_scalar_cochain(module, degree, config.seed + static_cast<std::uint64_t>(degree));
    const auto tuples = random_tuples(rng, config.tuples, degree + 2, 5);
    const json p{{"degree", degree}, {"tuples", config.tuples}, {"module", "scalar"}};
    out.records.push_back(make_check(suite, "dd-zero", p, cocycle_residual(coboundary(y), tuples), tol));
    const double dy = cocycle_residual(y, random_tuples(rng, 20, degree + 1, 5));
    out.records.push_back(make_check(suite, "random-cochain-not-closed", json{{"degree", degree}, {"dy", dy}},
                                     control_residual(dy, 1e-3), 0.0));
  }
  const auto lattice = std::make_shared<const LatticeOperatorModule>(config.lattice_window);
  for (int degree = 1; degree <= 2; ++degree) {
    const auto y = random_lattice_cochain(lattice, degree, config.seed + 10 + static_cast<std::uint64_t>(degree), 4, 3);
    const auto tuples = random_tuples(rng, config.tuples, degree + 2, 1);
    out.records.push_back(make_check(suite, "dd-zero",
                                     json{{"degree", degree}, {"tuples", config.tuples}, {"module", "lattice"},
                                          {"window", config.lattice_window}},
                                     cocycle_residual(coboundary(y), tuples), tol));
  }

  const auto& nu = config.measure;
  const auto pairs = random_tuples(rng, config.tuples, 2, 6);
  for (double r : config.base_points) {
    out.records.push_back(make_check(suite, "measure-cocycle", json{{"base_point", r}, {"tuples", config.tuples}},
                                     cocycle_residual(measure_cocycle(module, nu, r), pairs), tol));
  }
  {
    const auto counting = measure_cocycle(module, Measure::counting_measure(), 0.0);
    double worst = 0.0;
    for (int n = -10; n <= 10; ++n) {
      for (double rho : module->sample_points()) {
        if (rho != std::floor(rho)) continue;
        worst = std::max(worst, std::abs(counting({n})(rho) - n));
      }
    }
    out.records.push_back(make_check(suite, "counting-integral", json{{"range", 10}}, worst, tol));
  }

  const double r0 = config.base_points.front();
  const double r1 = config.base_points.size() > 1 ? config.base_points[1] : r0 + 0.5;
  const auto x = measure_cocycle(module, nu, r0);
  const auto y = measure_cocycle(module, nu, r1);
  const auto z = measure_cocycle(module, Measure::counting_measure(), -0.5);
  const auto triples = random_tuples(rng, config.tuples, 3, 4);
  out.records.push_back(make_check(suite, "cup-cocycle", json{{"r1", r0}, {"r2", r1}},
                                   cocycle_residual(cup(x, y), triples), tol));
  {
    const int k = static_cast<int>(config.base_points.size());
    out.records.push_back(make_check(suite, "tensor-cocycle", json{{"degree", k}},
                                     cocycle_residual(tensor_cocycle(module, nu, config.base_points),
                                                      random_tuples(rng, config.tuples, k + 1, 3)),
                                     tol));
  }
  out.records.push_back(make_check(suite, "cup-associativity", json{{"tuples", config.tuples}},
                                   distance(cup(cup(x, y), z), cup(x, cup(y, z)), triples), tol));
  {
    const auto a = random_scalar_cochain(module, 1, config.seed + 21);
    const auto b = random_scalar_cochain(module, 1, config.seed + 22);
    const auto lhs = coboundary(cup(a, b));
    const auto da_b = cup(coboundary(a), b);
    const auto a_db = cup(a, coboundary(b));
    double worst = 0.0;
    for (const auto& t : triples) worst = std::max(worst, module->norm(lhs(t) - (da_b(t) - a_db(t))));
    out.records.push_back(make_check(suite, "leibniz", json{{"degrees", "1,1"}}, worst, tol));
  }
  {
    const ScalarField f([](double r) { return std::sin(r) + 0.5 * r; });
    std::vector<std::pair<int, int>> ts;
    for (const auto& t : random_tuples(rng, 50, 2, 20)) ts.emplace_back(t[0], t[1]);
    out.records.push_back(make_check(suite, "action-additivity", json{{"module", "scalar"}},
                                     action_additivity_residual(*module, f, ts), tol));
  }

  // operator-valued cochains from the CAR process
  {
    const auto window = std::make_shared<const FermionWindow>(-4, 5);
    const CarProcess j(window);
    const auto fmod = std::make_shared<const FermionModule>(window);
    std::map<std::string, Cochain<FermionModule>> gens;
    for (auto s : {ProcessSymbol::a, ProcessSymbol::a_star, ProcessSymbol::number}) {
      gens.emplace(to_string(s), process_cochain(fmod, j, s));
    }
    double closed = 0.0;
    double word = 0.0;
    int checked = 0;
    const auto a_astar = extend_process(gens, {"a", "a*"});
    for (int t1 = -4; t1 <= 5; ++t1) {
      for (int t2 = -4; t2 <= 5; ++t2) {
        try {
          for (const auto& [name, g] : gens) closed = std::max(closed, fmod->norm(coboundary(g)({t1, t2})));
          const auto oracle = j(ProcessSymbol::a, t1) * window->shift(j(ProcessSymbol::a_star, t2), t1);
          word = std::max(word, (a_astar({t1, t2}) - oracle).max_entry());
          ++checked;
        } catch (const WindowOverflowError&) {
        } catch (const CochainDomainError&) {
        }
      }
    }
    out.records.push_back(make_check(suite, "process-cocycle", json{{"sites", "-4..5"}, {"pairs", checked}}, closed, tol));
    out.records.push_back(make_check(suite, "process-cup-word", json{{"word", "a a*"}, {"pairs", checked}}, word, tol));
  }
  return out;
}

SuiteOutput car_suite(const SuiteConfig& config) {
  SuiteOutput out;
  const std::string suite = "car";
  constexpr double tol = 1e-12;
  const auto window = std::make_shared<const FermionWindow>(config.car_lo, config.car_hi);
  const auto r = verify_relations(CarProcess(window));
  const json p{{"lo", config.car_lo}, {"hi", config.car_hi}, {"max_time", r.max_time}};
  out.records.push_back(make_check(suite, "car", p, r.car, tol));
  out.records.push_back(make_check(suite, "adjoint", p, r.adjoint, tol));
  out.records.push_back(make_check(suite, "min-anticommutator", p, r.min_anticommutator, tol));
  out.records.push_back(make_check(suite, "anticommutator", p, r.anticommutator, tol));
  out.records.push_back(make_check(suite, "unit-identity", p, r.unit_identity, tol));
  out.records.push_back(make_check(suite, "number-commutator", p, r.number_commutator, tol));
  out.records.push_back(make_check(suite, "number-commutator-star", p, r.number_commutator_star, tol));
  out.records.push_back(make_check(suite, "additivity", p, r.additivity, tol));
  out.records.push_back(make_check(suite, "parity", p, r.parity_ok ? 0.0 : 1.0, 0.0));

  Series witness{"car_witness", "n", "norm", {}};
  double oracle = 0.0;
  double positive = 0.0;
  for (size_t i = 0; i < r.witness.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    witness.rows.emplace_back(n, r.witness[i]);
    oracle = std::max(oracle, std::abs(r.witness[i] - (n - 1)));
    if (n >= 2) positive = std::max(positive, control_residual(r.witness[i], 0.5));
  }
  const json wp{{"n_max", static_cast<int>(r.witness.size())}};
  out.records.push_back(make_check(suite, "witness-positive", wp, positive, 0.0));
  out.records.push_back(make_check(suite, "witness-oracle", wp, oracle, tol));
  out.series.push_back(witness);
  return out;
}

SuiteOutput perturbation_suite(const SuiteConfig& config) {
  SuiteOutput out;
  const std::string suite = "perturbation";
  const auto window = std::make_shared<const FermionWindow>(config.pert_lo, config.pert_hi);
  const auto w = phase_unitary(*window, config.pert_site, config.pert_theta);
  const auto cocycle = std::make_shared<const AlgebraCocycle>(window, w, config.pert_horizon);
  const json p{{"lo", config.pert_lo}, {"hi", config.pert_hi}, {"site", config.pert_site},
               {"theta", config.pert_theta}, {"horizon", config.pert_horizon}};
  // exact identities carry a phase e^{i theta} through floating point
  constexpr double exact = 1e-14;

  json cp = p;
  cp["pairs"] = cocycle->checked_pairs();
  out.records.push_back(make_check(suite, "algebra-cocycle-identity", cp, cocycle->cocycle_residual(), 1e-12));
  out.records.push_back(make_check(suite, "algebra-unitarity", p, cocycle->unitarity_residual(), 1e-12));
  out.records.push_back(make_check(suite, "algebra-markovian", p, cocycle->markovian_residual(), 1e-12));
  out.records.push_back(make_check(suite, "past-invariance", p, cocycle->past_invariance_residual(), exact));

  const PerturbedProcess perturbed(CarProcess(window), cocycle);
  const auto add = verify_perturbed_additivity(perturbed);
  json ap = p;
  ap["pairs"] = add.pairs;
  out.records.push_back(make_check(suite, "perturbed-additivity", ap, add.residual, 1e-11));
  out.records.push_back(make_check(suite, "perturbed-future-unchanged", ap, add.future_unchanged, exact));

  const auto loc = verify_localization(perturbed);
  json lp = p;
  lp["depth"] = loc.depth;
  lp["checked"] = loc.checked;
  out.records.push_back(make_check(suite, "localization-future", lp, loc.future_residual, exact));
  out.records.push_back(make_check(suite, "localization-past", lp, loc.past_residual, exact));
  {
    const auto odd = window->annihilation(config.pert_site) + window->creation(config.pert_site);
    const auto control = std::make_shared<const AlgebraCocycle>(window, odd, std::min(4, config.pert_horizon),
                                                                AlgebraCocycle::Options{1e-12, true});
    const double c = verify_localization(PerturbedProcess(CarProcess(window), control)).future_residual;
    out.records.push_back(make_check(suite, "localization-negative-control", json{{"generator", "a + a*"}, {"residual", c}},
                                     control_residual(c, 1e-3), 0.0));
  }

  std::mt19937_64 rng(config.seed + 2);
  const auto ind = independence_check(*window, rng, config.independence_samples);
  const json ip{{"samples", ind.samples}, {"negative_control", ind.negative_control}};
  out.records.push_back(make_check(suite, "trace-factorization", ip, ind.residual, 1e-12));
  out.records.push_back(make_check(suite, "trace-factorization-negative-control", ip,
                                   control_residual(ind.negative_control, 1e-3), 0.0));

  out.records.push_back(make_check(suite, "perturbed-filtration-inclusion", p, perturbed_filtration_residual(*cocycle), exact));

  const auto powers = powers_shift_check(config.powers_depth);
  std::string dims;
  for (size_t i = 0; i < powers.algebra_dims.size(); ++i) dims += (i ? "," : "") + std::to_string(powers.algebra_dims[i]);
  const json pp{{"depth", powers.depth}, {"algebra_dims", dims}, {"intersection_dim", powers.intersection_dim}};
  out.records.push_back(make_check(suite, "powers-shift-images", pp, powers.shift_residual, exact));
  out.records.push_back(make_check(suite, "powers-chain-decreasing", pp, powers.chain_decreasing ? 0.0 : 1.0, 0.0));
  out.records.push_back(make_check(suite, "powers-intersection-scalars", pp, std::abs(powers.intersection_dim - 1), 0.0));

  const Conjugacy conj(cocycle);
  const auto cr = conj.verify(interior_elements(*window), 2);
  std::string skipped;
  for (const auto& s : cr.skipped) skipped += (skipped.empty() ? "" : "; ") + s;
  json kp = p;
  kp["checked"] = cr.checked;
  kp["skipped"] = skipped;
  out.records.push_back(make_check(suite, "conjugacy-left-inverse", kp, cr.left_inverse, 1e-11));
  out.records.push_back(make_check(suite, "conjugacy-right-inverse", kp, cr.right_inverse, 1e-11));
  out.records.push_back(make_check(suite, "conjugacy-intertwining", kp, cr.intertwining, 1e-11));
  out.records.push_back(make_check(suite, "conjugacy-stabilization", kp, cr.stabilization, 1e-11));
  return out;
}

SuiteOutput run_suite(const std::string& name, const SuiteConfig& config) {
  using Runner = SuiteOutput (*)(const SuiteConfig&);
  static const std::map<std::string, Runner> runners = {{"shift-cocycles", &shift_cocycle_suite},
                                                        {"cohomology", &cohomology_suite},
                                                        {"car", &car_suite},
                                                        {"perturbation", &perturbation_suite}};
  if (name == "all") {
    std::vector<std::future<SuiteOutput>> jobs;
    for (const auto& n : suite_names()) jobs.push_back(std::async(std::launch::async, runners.at(n), std::cref(config)));
    SuiteOutput out;
    // get() in order: the first failing suite's exception propagates, and
    // the merged report does not depend on scheduling
    for (auto& job : jobs) out.append(job.get());
    return out;
  }
  auto it = runners.find(name);
  if (it == runners.end()) throw std::invalid_argument("unknown suite '" + name + "'");
  return it->second(config);
}

InnerDemo demo_inner(const InnerScenario& scenario, int half_width, double tolerance) {
  InnerOptions opt;
  opt.suite = "demo-inner";
  opt.tolerance = tolerance;
  opt.limit = half_width <= 128;
  auto a = analyze_inner(scenario, half_width, opt);

  InnerDemo d;
  d.model_dimension = a.dimension;
  d.defect_index = a.defect_index;
  for (Eigen::Index i = 0; i < a.eigenvalues.size(); ++i) d.unitary_eigenvalues.push_back(a.eigenvalues[i]);
  d.spectrum_mismatch = a.mismatch;
  d.identity_residual = a.identity_residual;

  std::ostringstream os;
  os << "theta: " << theta_label(scenario) << "\n";
  os << "window: N = " << half_width << "\n";
  os << "K_theta dimension: " << d.model_dimension << "\n";
  os << "defect index: " << d.defect_index << "\n";
  os << "requested spectrum:";
  for (const auto& l : scenario.spectrum) os << " " << complex_text(l);
  os << "\nunitary part eigenvalues:";
  for (const auto& l : d.unitary_eigenvalues) os << " " << complex_text(l);
  os << "\nspectrum mismatch: " << d.spectrum_mismatch << "\n";
  os << "max |W_{-n} - I|: " << d.identity_residual << (d.identity_residual == 0.0 ? "  (W = I)" : "") << "\n";
  for (const auto& r : a.out.records) {
    os << "  " << to_string(r.status) << "  " << r.check << "  residual " << r.residual << "\n";
  }
  d.summary = os.str();
  d.output = std::move(a.out);
  return d;
}

}  // namespace qcohom
