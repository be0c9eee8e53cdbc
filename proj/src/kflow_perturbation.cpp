#include "qcohom/kflow_perturbation.hpp"

#include <cmath>

namespace qcohom {

namespace {

double graded_commutation(const FermionWindow& window, const FermionOperator& x, int first, int last) {
  const auto [even, odd] = window.graded_parts(x);
  double worst = 0.0;
  for (int k = std::max(first, window.lo()); k <= std::min(last, window.hi()); ++k) {
    for (const auto* g : {&window.annihilation(k), &window.creation(k)}) {
      worst = std::max(worst, commutator(even, *g).max_entry());
      worst = std::max(worst, anticommutator(odd, *g).max_entry());
    }
  }
  return worst;
}

FermionOperator conjugate(const FermionOperator& u, const FermionOperator& x) { return u * x * u.adjoint(); }

double filtration_residual(const AlgebraCocycle& w) {
  const auto& window = w.window();
  double worst = 0.0;
  for (int n = 0; n <= w.horizon(); ++n) {
    if (!w.available(n)) continue;
    for (const auto& x : generators(window, window.lo(), n)) {
      worst = std::max(worst, past_membership_residual(window, conjugate(w.at(n), x), n));
    }
  }
  return worst;
}

}  // namespace

std::vector<FermionOperator> generators(const FermionWindow& window, int first, int last) {
  std::vector<FermionOperator> out;
  for (int k = std::max(first, window.lo()); k <= std::min(last, window.hi()); ++k) {
    out.push_back(window.annihilation(k));
    out.push_back(window.creation(k));
  }
  return out;
}

double past_membership_residual(const FermionWindow& window, const FermionOperator& x, int t) {
  return graded_commutation(window, x, t + 1, window.hi());
}

double future_membership_residual(const FermionWindow& window, const FermionOperator& x, int t) {
  return graded_commutation(window, x, window.lo(), t);
}

FermionOperator phase_unitary(const FermionWindow& window, int site, double theta) {
  const Complex phase = std::polar(1.0, theta) - 1.0;
  return window.identity() + window.number(site) * phase;
}

AlgebraCocycle::AlgebraCocycle(std::shared_ptr<const FermionWindow> window, FermionOperator w, int horizon)
    : AlgebraCocycle(std::move(window), std::move(w), horizon, Options{}) {}

AlgebraCocycle::AlgebraCocycle(std::shared_ptr<const FermionWindow> window, FermionOperator w, int horizon,
                               Options options)
    : window_(std::move(window)), w_(std::move(w)), horizon_(horizon) {
  const auto& win = *window_;
  const auto id = win.identity();
  if ((w_.adjoint() * w_ - id).max_entry() > options.tolerance) {
    throw std::invalid_argument("cocycle generator is not unitary");
  }
  if (w_.support() && w_.support()->second > 0) {
    throw LocalizationError("cocycle generator must live on sites <= 0");
  }
  const Parity parity = win.measured_parity(w_);
  if (parity != Parity::even) {
    if (!options.allow_odd) throw std::invalid_argument("cocycle generator must be even, got " + to_string(parity));
    odd_ = true;
  }

  family_.emplace(0, id);
  const auto w_star = w_.adjoint();
  try {
    FermionOperator forward = id;
    for (int n = 1; n <= horizon_; ++n) {
      forward = forward * win.shift(w_, n - 1);
      family_.emplace(n, forward);
    }
  } catch (const WindowOverflowError&) {
    // later times do not fit the window
  }
  try {
    FermionOperator backward = id;
    for (int n = 1; n <= horizon_; ++n) {
      backward = backward * win.shift(w_star, -n);
      family_.emplace(-n, backward);
    }
  } catch (const WindowOverflowError&) {
  }

  for (const auto& [t, wt] : family_) {
    unitarity_residual_ = std::max(unitarity_residual_, (wt.adjoint() * wt - id).max_entry());
  }
  for (const auto& [m, wm] : family_) {
    for (const auto& [n, wn] : family_) {
      if (!available(m + n)) continue;
      try {
        const auto diff = at(m + n) - wm * win.shift(wn, m);
        cocycle_residual_ = std::max(cocycle_residual_, diff.max_entry());
        ++checked_pairs_;
      } catch (const WindowOverflowError&) {
      }
    }
  }
  for (int n = 0; n <= horizon_; ++n) {
    if (!available(n)) continue;
    for (const auto& x : generators(win, n, win.hi())) {
      markovian_residual_ = std::max(markovian_residual_, (conjugate(at(n), x) - x).max_entry());
    }
  }
  past_invariance_residual_ = filtration_residual(*this);
}

bool AlgebraCocycle::available(int t) const { return family_.count(t) > 0; }

const FermionOperator& AlgebraCocycle::at(int t) const {
  auto it = family_.find(t);
  if (it == family_.end()) throw WindowOverflowError("W_" + std::to_string(t) + " does not fit the fermion window");
  return it->second;
}

int AlgebraCocycle::past_depth() const {
  int k = 0;
  while (available(-(k + 1))) ++k;
  return k;
}

double perturbed_filtration_residual(const AlgebraCocycle& w) { return filtration_residual(w); }

PerturbedProcess::PerturbedProcess(CarProcess process, std::shared_ptr<const AlgebraCocycle> cocycle)
    : process_(std::move(process)), cocycle_(std::move(cocycle)) {
  if (&process_.window() != &cocycle_->window()) {
    throw std::invalid_argument("process and cocycle must share one fermion window");
  }
  // odd generators get through only as negative controls
  if (!cocycle_->odd_generator() && cocycle_->markovian_residual() > 1e-11) {
    throw std::invalid_argument("perturbation needs a markovian cocycle");
  }
}

FermionOperator PerturbedProcess::operator()(ProcessSymbol s, int n) const {
  const auto x = process_(s, n);
  if (n >= 0) return x;
  return conjugate(cocycle_->at(n), x);
}

FermionOperator PerturbedProcess::alpha(const FermionOperator& y, int m) const {
  return conjugate(cocycle_->at(m), process_.window().shift(y, m));
}

AdditivityReport verify_perturbed_additivity(const PerturbedProcess& p) {
  AdditivityReport report;
  const auto& w = p.process().window();
  const auto& cocycle = p.cocycle();
  for (ProcessSymbol s : {ProcessSymbol::a, ProcessSymbol::a_star, ProcessSymbol::number, ProcessSymbol::unit}) {
    for (int m = w.lo() - 1; m <= w.hi(); ++m) {
      for (int n = w.lo() - 1; n <= w.hi(); ++n) {
        const auto& proc = p.process();
        if (!proc.in_window(m) || !proc.in_window(n) || !proc.in_window(m + n)) continue;
        if (!cocycle.available(m) || (n < 0 && !cocycle.available(n)) || (m + n < 0 && !cocycle.available(m + n))) {
          continue;
        }
        try {
          const auto diff = p(s, m + n) - p(s, m) - p.alpha(p(s, n), m);
          const double r = diff.max_entry();
          report.residual = std::max(report.residual, r);
          if (m < 0 && n < 0) report.negative_residual = std::max(report.negative_residual, r);
          ++report.pairs;
        } catch (const WindowOverflowError&) {
        }
      }
    }
    for (int n = 0; n <= w.hi(); ++n) {
      if (!p.process().in_window(n)) continue;
      report.future_unchanged = std::max(report.future_unchanged, (p(s, n) - p.process()(s, n)).max_entry());
    }
  }
  return report;
}

LocalizationReport verify_localization(const PerturbedProcess& p) {
  LocalizationReport report;
  const auto& w = p.process().window();
  const auto& cocycle = p.cocycle();
  if (cocycle.generator().support()) report.depth = std::max(0, -cocycle.generator().support()->first);

  auto elements = [&](int first) {
    auto out = generators(w, first, w.hi());
    for (int k = std::max(first, w.lo()); k <= w.hi(); ++k) out.push_back(w.annihilation(k) * w.creation(k));
    return out;
  };
  for (int m = 0; m <= cocycle.horizon(); ++m) {
    if (cocycle.available(m)) {
      for (const auto& x : elements(1)) {
        try {
          report.future_residual = std::max(report.future_residual, (p.alpha(x, m) - w.shift(x, m)).max_entry());
          ++report.checked;
        } catch (const WindowOverflowError&) {
        }
      }
    }
    if (cocycle.available(-m)) {
      for (const auto& x : elements(m + 1)) {
        try {
          report.past_residual = std::max(report.past_residual, (p.alpha(x, -m) - w.shift(x, -m)).max_entry());
          ++report.checked;
        } catch (const WindowOverflowError&) {
        }
      }
    }
  }
  return report;
}

namespace {

FermionOperator random_element(const FermionWindow& w, int first, int last, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> site(first, last);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> length(1, 3);
  std::normal_distribution<double> g;
  FermionOperator out = w.identity() * Complex(g(rng), g(rng));
  for (int term = 0; term < 3; ++term) {
    FermionOperator mono = w.identity();
    const int len = length(rng);
    for (int f = 0; f < len; ++f) {
      const int k = site(rng);
      switch (kind(rng)) {
        case 0: mono = mono * w.annihilation(k); break;
        case 1: mono = mono * w.creation(k); break;
        default: mono = mono * w.number(k); break;
      }
    }
    out = out + mono * Complex(g(rng), g(rng));
  }
  return out;
}

}  // namespace

IndependenceReport independence_check(const FermionWindow& window, std::mt19937_64& rng, int samples) {
  IndependenceReport report;
  std::uniform_int_distribution<int> cut(window.lo(), window.hi() - 1);
  for (int i = 0; i < samples; ++i) {
    const int t = cut(rng);
    const auto x = random_element(window, t + 1, window.hi(), rng);
    const auto y = random_element(window, window.lo(), t, rng);
    const Complex lhs = window.state(x * y);
    const Complex rhs = window.state(x) * window.state(y);
    report.residual = std::max(report.residual, std::abs(lhs - rhs));
    ++report.samples;
  }
  // overlapping control: phi(n n) - phi(n)^2 = 1/2 - 1/4
  const auto n = window.number(window.lo());
  report.negative_control = std::abs(window.state(n * n) - window.state(n) * window.state(n));
  return report;
}

PowersShiftReport powers_shift_check(int depth) {
  if (depth < 1 || depth > 6) throw std::invalid_argument("powers_shift_check supports depth 1..6");
  const FermionWindow w(-depth + 1, 0);
  PowersShiftReport report;
  report.depth = depth;

  for (int n = 0; n < depth; ++n) {
    for (int k = w.lo() + n; k <= 0; ++k) {
      report.shift_residual = std::max(
          report.shift_residual, (w.shift(w.annihilation(k), -n) - w.annihilation(k - n)).max_entry());
      report.shift_residual =
          std::max(report.shift_residual, (w.shift(w.creation(k), -n) - w.creation(k - n)).max_entry());
    }
  }

  report.chain_decreasing = true;
  for (int n = 0; n < depth; ++n) {
    for (const auto& x : generators(w, w.lo(), -n - 1)) {
      if (past_membership_residual(w, x, -n) > 0.0) report.chain_decreasing = false;
    }
  }

  // Majorana monomials form a trace-orthogonal basis on which graded
  // commutation with each Majorana generator is diagonal, so counting the
  // monomials that pass is the dimension of the commutant.
  std::vector<FermionOperator> majorana;
  for (int k = w.lo(); k <= w.hi(); ++k) {
    majorana.push_back(w.annihilation(k) + w.creation(k));
    majorana.push_back((w.creation(k) - w.annihilation(k)) * Complex(0.0, 1.0));
  }
  const int count = static_cast<int>(majorana.size());
  std::vector<std::vector<bool>> commutes(static_cast<size_t>(1) << count);
  for (size_t mask = 0; mask < commutes.size(); ++mask) {
    FermionOperator mono = w.identity();
    int weight = 0;
    for (int j = 0; j < count; ++j) {
      if ((mask >> j) & 1) {
        mono = mono * majorana[static_cast<size_t>(j)];
        ++weight;
      }
    }
    auto& row = commutes[mask];
    row.resize(static_cast<size_t>(count));
    for (int j = 0; j < count; ++j) {
      const auto& g = majorana[static_cast<size_t>(j)];
      const auto graded = weight % 2 ? mono * g + g * mono : mono * g - g * mono;
      row[static_cast<size_t>(j)] = graded.max_entry() <= 1e-12;
    }
  }
  auto passes = [&](size_t mask, int n) {
    // graded commutant of the Majoranas at sites > -n
    for (int j = 0; j < count; ++j) {
      const int site = w.lo() + j / 2;
      if (site > -n && !commutes[mask][static_cast<size_t>(j)]) return false;
    }
    return true;
  };
  for (int n = 0; n <= depth; ++n) {
    int dim = 0;
    for (size_t mask = 0; mask < commutes.size(); ++mask) dim += passes(mask, n) ? 1 : 0;
    report.algebra_dims.push_back(dim);
  }
  for (size_t mask = 0; mask < commutes.size(); ++mask) {
    bool all = true;
    for (int n = 0; n <= depth && all; ++n) all = passes(mask, n);
    report.intersection_dim += all ? 1 : 0;
  }
  return report;
}

Conjugacy::Conjugacy(std::shared_ptr<const AlgebraCocycle> w) : w_(std::move(w)) {
  if (w_->odd_generator()) throw std::invalid_argument("conjugacy needs an even cocycle generator");
}

int Conjugacy::stabilization_index(const FermionOperator& x) const {
  const auto& support = w_->generator().support();
  if (!support || !x.support()) return 0;
  // the factor a_{-j}(w*) sits on [lo - j, hi - j] and drops out once it is below x
  return std::max(0, support->second - x.support()->first);
}

FermionOperator Conjugacy::theta(const FermionOperator& x) const {
  const int s = stabilization_index(x);
  if (!w_->available(-s)) {
    throw LocalizationError("W_{-" + std::to_string(s) + "} needed for theta does not fit the window");
  }
  return conjugate(w_->at(-s), x);
}

FermionOperator Conjugacy::theta_plus(const FermionOperator& y) const {
  const auto& wk = w_->at(-w_->past_depth());
  return wk.adjoint() * y * wk;
}

FermionOperator Conjugacy::beta_tilde(const FermionOperator& y, int n) const {
  return conjugate(w_->at(-n), w_->window().shift(y, -n));
}

ConjugacyReport Conjugacy::verify(const std::vector<FermionOperator>& elements, int max_n) const {
  ConjugacyReport report;
  const auto& window = w_->window();
  const auto& wk = w_->at(-w_->past_depth());
  for (size_t i = 0; i < elements.size(); ++i) {
    const auto& x = elements[i];
    try {
      const auto tx = theta(x);
      report.stabilization = std::max(report.stabilization, (tx - conjugate(wk, x)).max_entry());
      report.left_inverse = std::max(report.left_inverse, (theta_plus(tx) - x).max_entry());
      report.right_inverse = std::max(report.right_inverse, (theta(theta_plus(tx)) - tx).max_entry());
      for (int n = 1; n <= max_n; ++n) {
        const auto lhs = beta_tilde(tx, n);
        const auto rhs = theta(window.shift(x, -n));
        report.intertwining = std::max(report.intertwining, (lhs - rhs).max_entry());
      }
      ++report.checked;
    } catch (const std::exception& e) {
      report.skipped.push_back("element " + std::to_string(i) + ": " + e.what());
    }
  }
  return report;
}

std::vector<FermionOperator> interior_elements(const FermionWindow& window) {
  return {window.annihilation(-1), window.creation(-2) * window.annihilation(-2),
          window.annihilation(-1) * window.creation(-2), window.number(-3)};
}

}  // namespace qcohom
