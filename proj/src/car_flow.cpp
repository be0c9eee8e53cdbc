#include "qcohom/car_flow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qcohom {

namespace {

Parity product_parity(Parity a, Parity b) {
  if (a == Parity::mixed || b == Parity::mixed) return Parity::mixed;
  return a == b ? Parity::even : Parity::odd;
}

FermionOperator::Support hull(const FermionOperator::Support& a, const FermionOperator::Support& b) {
  if (!a) return b;
  if (!b) return a;
  return std::make_pair(std::min(a->first, b->first), std::max(a->second, b->second));
}

SparseMatrix sparse_identity(int dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

double max_entry_of(const SparseMatrix& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

}  // namespace

std::string to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::mixed: return "mixed";
  }
  return "mixed";
}

FermionOperator::FermionOperator(SparseMatrix matrix, Support support, Parity parity)
    : matrix_(std::move(matrix)), support_(support), parity_(parity) {
  matrix_.prune(Complex(0.0, 0.0));
  matrix_.makeCompressed();
}

FermionOperator FermionOperator::adjoint() const {
  return FermionOperator(SparseMatrix(matrix_.adjoint()), support_, parity_);
}

FermionOperator FermionOperator::operator+(const FermionOperator& o) const {
  return FermionOperator(SparseMatrix(matrix_ + o.matrix_), hull(support_, o.support_),
                         parity_ == o.parity_ ? parity_ : Parity::mixed);
}

FermionOperator FermionOperator::operator-(const FermionOperator& o) const {
  return FermionOperator(SparseMatrix(matrix_ - o.matrix_), hull(support_, o.support_),
                         parity_ == o.parity_ ? parity_ : Parity::mixed);
}

FermionOperator FermionOperator::operator-() const { return FermionOperator(SparseMatrix(-matrix_), support_, parity_); }

FermionOperator FermionOperator::operator*(const FermionOperator& o) const {
  return FermionOperator(SparseMatrix(matrix_ * o.matrix_), hull(support_, o.support_),
                         product_parity(parity_, o.parity_));
}

FermionOperator FermionOperator::operator*(Complex c) const {
  return FermionOperator(SparseMatrix(matrix_ * c), support_, parity_);
}

FermionOperator operator*(Complex c, const FermionOperator& x) { return x * c; }

double FermionOperator::max_entry() const { return max_entry_of(matrix_); }

FermionOperator commutator(const FermionOperator& x, const FermionOperator& y) { return x * y - y * x; }

FermionOperator anticommutator(const FermionOperator& x, const FermionOperator& y) { return x * y + y * x; }

FermionWindow::FermionWindow(int lo, int hi) : lo_(lo), hi_(hi) {
  if (hi < lo) throw std::invalid_argument("empty fermion window");
  if (hi - lo + 1 > kMaxFermionSites) {
    throw std::invalid_argument("fermion window of " + std::to_string(hi - lo + 1) + " sites exceeds the cap of " +
                                std::to_string(kMaxFermionSites));
  }
  const int n = sites();
  const int dim = dimension();

  std::vector<Eigen::Triplet<Complex>> parity;
  for (int s = 0; s < dim; ++s) parity.emplace_back(s, s, std::popcount(static_cast<unsigned>(s)) % 2 ? -1.0 : 1.0);
  parity_.resize(dim, dim);
  parity_.setFromTriplets(parity.begin(), parity.end());

  for (int i = 0; i < n; ++i) {
    // a_i |n> = (-1)^{occupation below i} |n - e_i>
    std::vector<Eigen::Triplet<Complex>> entries;
    for (int s = 0; s < dim; ++s) {
      if (!((s >> i) & 1)) continue;
      const int below = std::popcount(static_cast<unsigned>(s & ((1 << i) - 1)));
      entries.emplace_back(s ^ (1 << i), s, below % 2 ? -1.0 : 1.0);
    }
    SparseMatrix a(dim, dim);
    a.setFromTriplets(entries.begin(), entries.end());
    const auto site = std::make_pair(lo + i, lo + i);
    a_.emplace_back(a, site, Parity::odd);
    a_star_.emplace_back(SparseMatrix(a.adjoint()), site, Parity::odd);
  }

  for (int m = -(n - 1); m <= n - 1; ++m) {
    std::vector<Eigen::Triplet<Complex>> entries;
    for (int s = 0; s < dim; ++s) {
      std::vector<int> image;
      for (int i = 0; i < n; ++i) {
        if ((s >> i) & 1) image.push_back(((i + m) % n + n) % n);
      }
      int inversions = 0;
      int target = 0;
      for (size_t p = 0; p < image.size(); ++p) {
        target |= 1 << image[p];
        for (size_t q = p + 1; q < image.size(); ++q) inversions += image[p] > image[q] ? 1 : 0;
      }
      entries.emplace_back(target, s, inversions % 2 ? -1.0 : 1.0);
    }
    SparseMatrix g(dim, dim);
    g.setFromTriplets(entries.begin(), entries.end());
    rotations_.push_back(std::move(g));
  }

  const double residual = car_residual();
  if (residual > 1e-12) throw std::logic_error("CAR relations fail on construction: " + std::to_string(residual));
}

const FermionOperator& FermionWindow::annihilation(int site) const {
  if (!contains(site)) throw WindowOverflowError("site " + std::to_string(site) + " outside the fermion window");
  return a_[static_cast<size_t>(site - lo_)];
}

const FermionOperator& FermionWindow::creation(int site) const {
  if (!contains(site)) throw WindowOverflowError("site " + std::to_string(site) + " outside the fermion window");
  return a_star_[static_cast<size_t>(site - lo_)];
}

FermionOperator FermionWindow::number(int site) const { return creation(site) * annihilation(site); }

FermionOperator FermionWindow::identity() const {
  return FermionOperator(sparse_identity(dimension()), std::nullopt, Parity::even);
}

FermionOperator FermionWindow::shift(const FermionOperator& x, int m) const {
  if (m == 0 || !x.support()) return x;
  const auto [first, last] = *x.support();
  if (!contains(first + m) || !contains(last + m)) {
    throw WindowOverflowError("shift by " + std::to_string(m) + " moves sites [" + std::to_string(first) + ", " +
                              std::to_string(last) + "] outside the fermion window [" + std::to_string(lo_) + ", " +
                              std::to_string(hi_) + "]");
  }
  const SparseMatrix& g = rotations_[static_cast<size_t>(m + sites() - 1)];
  SparseMatrix moved = g * x.matrix() * SparseMatrix(g.adjoint());
  return FermionOperator(std::move(moved), std::make_pair(first + m, last + m), x.parity());
}

std::pair<FermionOperator, FermionOperator> FermionWindow::graded_parts(const FermionOperator& x) const {
  const SparseMatrix flipped = parity_ * x.matrix() * parity_;
  FermionOperator even(SparseMatrix((x.matrix() + flipped) * Complex(0.5, 0.0)), x.support(), Parity::even);
  FermionOperator odd(SparseMatrix((x.matrix() - flipped) * Complex(0.5, 0.0)), x.support(), Parity::odd);
  return {even, odd};
}

Parity FermionWindow::measured_parity(const FermionOperator& x, double tol) const {
  const auto [even, odd] = graded_parts(x);
  if (odd.max_entry() <= tol) return Parity::even;
  if (even.max_entry() <= tol) return Parity::odd;
  return Parity::mixed;
}

double FermionWindow::car_residual() const {
  double worst = 0.0;
  const auto id = identity();
  for (int k = lo_; k <= hi_; ++k) {
    for (int l = lo_; l <= hi_; ++l) {
      const auto& ak = annihilation(k);
      const auto& al = annihilation(l);
      const auto mixed = anticommutator(ak, creation(l));
      worst = std::max(worst, (k == l ? mixed - id : mixed).max_entry());
      worst = std::max(worst, anticommutator(ak, al).max_entry());
    }
  }
  const SparseMatrix p2 = parity_ * parity_ - sparse_identity(dimension());
  return std::max(worst, max_entry_of(p2));
}

Complex FermionWindow::state(const FermionOperator& x) const {
  Complex tr(0.0, 0.0);
  for (int k = 0; k < x.matrix().outerSize(); ++k) tr += x.matrix().coeff(k, k);
  return tr / static_cast<double>(dimension());
}

double hermitian_norm(const FermionOperator& x) {
  if (x.matrix().rows() > 1024) throw std::invalid_argument("hermitian_norm supports at most 10 sites");
  const Matrix dense(x.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::string to_string(ProcessSymbol s) {
  switch (s) {
    case ProcessSymbol::a: return "a";
    case ProcessSymbol::a_star: return "a*";
    case ProcessSymbol::number: return "a*a";
    case ProcessSymbol::unit: return "1";
  }
  return "?";
}

ProcessSymbol parse_symbol(const std::string& s) {
  if (s == "a") return ProcessSymbol::a;
  if (s == "a*") return ProcessSymbol::a_star;
  if (s == "a*a") return ProcessSymbol::number;
  if (s == "1") return ProcessSymbol::unit;
  throw std::invalid_argument("unknown process symbol '" + s + "'");
}

bool CarProcess::in_window(int n) const {
  if (n > 0) return window_->contains(1) && window_->contains(n);
  if (n < 0) return window_->contains(n + 1) && window_->contains(0);
  return true;
}

FermionOperator CarProcess::operator()(ProcessSymbol s, int n) const {
  const auto& w = *window_;
  if (s == ProcessSymbol::unit) return w.identity() * Complex(n, 0.0);
  if (!in_window(n)) throw WindowOverflowError("process time " + std::to_string(n) + " needs sites outside the window");
  const Parity parity = s == ProcessSymbol::number ? Parity::even : Parity::odd;
  FermionOperator sum(SparseMatrix(w.dimension(), w.dimension()), std::nullopt, parity);
  const int first = n > 0 ? 1 : n + 1;
  const int last = n > 0 ? n : 0;
  for (int k = first; k <= last && n != 0; ++k) {
    switch (s) {
      case ProcessSymbol::a: sum = sum + w.annihilation(k); break;
      case ProcessSymbol::a_star: sum = sum + w.creation(k); break;
      default: sum = sum + w.number(k); break;
    }
  }
  return n >= 0 ? sum : -sum;
}

FermionOperator odot(const FermionWindow& window, const std::vector<std::string>& symbols,
                     const std::vector<int>& sites) {
  if (symbols.size() != sites.size()) throw std::invalid_argument("odot needs one site per symbol");
  if (symbols.empty()) throw std::invalid_argument("odot of an empty word");
  FermionOperator out = window.identity();
  for (size_t i = 0; i < symbols.size(); ++i) {
    const int k = sites[i];
    const auto& s = symbols[i];
    if (s == "a") {
      out = out * window.annihilation(k);
    } else if (s == "a*") {
      out = out * window.creation(k);
    } else if (s == "a*a") {
      out = out * window.creation(k) * window.annihilation(k);
    } else if (s == "aa*") {
      out = out * window.annihilation(k) * window.creation(k);
    } else {
      throw std::invalid_argument("unknown odot symbol '" + s + "'");
    }
  }
  return out;
}

RelationReport verify_relations(const CarProcess& process) {
  const auto& w = process.window();
  if (!w.contains(1) || !w.contains(2)) throw std::invalid_argument("relation suite needs sites 1 and 2 in the window");
  RelationReport report;
  report.car = w.car_residual();
  report.max_time = w.hi();
  const auto id = w.identity();
  const int top = w.hi();

  report.parity_ok = true;
  for (int n = 1; n <= top; ++n) {
    const auto an = process(ProcessSymbol::a, n);
    const auto an_star = process(ProcessSymbol::a_star, n);
    const auto lambda = process(ProcessSymbol::number, n);
    report.adjoint = std::max(report.adjoint, (an_star - an.adjoint()).max_entry());
    report.unit_identity = std::max(
        report.unit_identity, (an_star * an + an * an_star - process(ProcessSymbol::unit, n)).max_entry());
    report.number_commutator = std::max(report.number_commutator, (commutator(lambda, an) + an).max_entry());
    report.number_commutator_star =
        std::max(report.number_commutator_star, (commutator(lambda, an_star) - an_star).max_entry());
    report.parity_ok = report.parity_ok && w.measured_parity(an) == Parity::odd &&
                       w.measured_parity(lambda) == Parity::even;
    for (int m = 1; m <= top; ++m) {
      const auto am = process(ProcessSymbol::a, m);
      const auto mixed = an * am.adjoint() + am.adjoint() * an;
      report.min_anticommutator =
          std::max(report.min_anticommutator, (mixed - id * Complex(std::min(n, m), 0.0)).max_entry());
      report.anticommutator = std::max(report.anticommutator, anticommutator(an, am).max_entry());
    }
  }

  for (ProcessSymbol s : {ProcessSymbol::a, ProcessSymbol::a_star, ProcessSymbol::number, ProcessSymbol::unit}) {
    for (int m = w.lo() - 1; m <= top; ++m) {
      for (int n = w.lo() - 1; n <= top; ++n) {
        if (!process.in_window(m) || !process.in_window(n) || !process.in_window(m + n)) continue;
        try {
          const auto diff = process(s, m + n) - process(s, m) - w.shift(process(s, n), m);
          report.additivity = std::max(report.additivity, diff.max_entry());
        } catch (const WindowOverflowError&) {
          // a_m(X_n) leaves the window
        }
      }
    }
  }

  for (int n = 1; n <= std::min(top, 10); ++n) {
    const CarProcess local(std::make_shared<const FermionWindow>(1, n));
    const auto an = local(ProcessSymbol::a, n);
    report.witness.push_back(hermitian_norm(local(ProcessSymbol::number, n) - an.adjoint() * an));
  }
  return report;
}

Cochain<FermionModule> process_cochain(std::shared_ptr<const FermionModule> module, const CarProcess& process,
                                       ProcessSymbol symbol) {
  const auto& w = process.window();
  const int bound = std::max(std::abs(w.lo() - 1), std::abs(w.hi()));
  auto rule = [process, symbol](std::span<const int> t) { return process(symbol, t[0]); };
  return Cochain<FermionModule>(std::move(module), 1, std::move(rule), bound, to_string(symbol));
}

}  // namespace qcohom
