#pragma once

// Fermions on a finite block of lattice sites through the Jordan-Wigner
// representation: creation/annihilation operators, the shift automorphism,
// the discrete basic processes A_n, A_n*, Lambda_n, n*1 and the relation suite.
//
// Basis states are bit strings n (bit i = occupation of site lo + i) and
// a*_{s_1} ... a*_{s_p}|0> = +|n> for s_1 < ... < s_p.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "qcohom/cohomology_ring.hpp"
#include "qcohom/core_lattice.hpp"

namespace qcohom {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr int kMaxFermionSites = 12;

enum class Parity { even, odd, mixed };

std::string to_string(Parity p);

/// Operator on the window Fock space with its site hull and parity. The hull
/// is the smallest interval of sites the operator is known to live on; the
/// identity has none.
class FermionOperator {
 public:
  using Support = std::optional<std::pair<int, int>>;

  FermionOperator(SparseMatrix matrix, Support support, Parity parity);

  const SparseMatrix& matrix() const { return matrix_; }
  const Support& support() const { return support_; }
  Parity parity() const { return parity_; }

  FermionOperator adjoint() const;

  FermionOperator operator+(const FermionOperator& o) const;
  FermionOperator operator-(const FermionOperator& o) const;
  FermionOperator operator-() const;
  FermionOperator operator*(const FermionOperator& o) const;
  FermionOperator operator*(Complex c) const;

  /// Largest |entry| (0 for the zero operator).
  double max_entry() const;

 private:
  SparseMatrix matrix_;
  Support support_;
  Parity parity_;
};

FermionOperator operator*(Complex c, const FermionOperator& x);

/// [x, y] and x y + y x.
FermionOperator commutator(const FermionOperator& x, const FermionOperator& y);
FermionOperator anticommutator(const FermionOperator& x, const FermionOperator& y);

class FermionWindow {
 public:
  /// Sites lo..hi inclusive, at most kMaxFermionSites of them. CAR relations
  /// are checked on construction.
  FermionWindow(int lo, int hi);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int sites() const { return hi_ - lo_ + 1; }
  int dimension() const { return 1 << sites(); }
  bool contains(int site) const { return site >= lo_ && site <= hi_; }

  const FermionOperator& annihilation(int site) const;
  const FermionOperator& creation(int site) const;
  FermionOperator number(int site) const;
  FermionOperator identity() const;
  /// (-1)^{total occupation}.
  const SparseMatrix& parity_operator() const { return parity_; }

  /// a_k -> a_{k+m}; throws WindowOverflowError when the hull leaves the window.
  FermionOperator shift(const FermionOperator& x, int m) const;

  /// Parity measured from the matrix: x = P x P (even) or -P x P (odd).
  Parity measured_parity(const FermionOperator& x, double tol = 1e-12) const;
  /// Even and odd parts (x + PxP)/2 and (x - PxP)/2.
  std::pair<FermionOperator, FermionOperator> graded_parts(const FermionOperator& x) const;

  /// max over cached k, l of the CAR residuals.
  double car_residual() const;

  /// Normalized trace.
  Complex state(const FermionOperator& x) const;

 private:
  int lo_;
  int hi_;
  std::vector<FermionOperator> a_;
  std::vector<FermionOperator> a_star_;
  SparseMatrix parity_;
  std::vector<SparseMatrix> rotations_;  ///< Gamma for m = -(sites-1)..(sites-1)
};

/// Spectral norm of a Hermitian operator (dense eigensolver; windows up to
/// 10 sites).
double hermitian_norm(const FermionOperator& x);

enum class ProcessSymbol { a, a_star, number, unit };

std::string to_string(ProcessSymbol s);
ProcessSymbol parse_symbol(const std::string& s);

/// Time step n <-> site n. X_n = sum over sites (0, n] for n > 0 and minus
/// the sum over (n, 0] for n < 0, so that X_{m+n} = X_m + a_m(X_n).
class CarProcess {
 public:
  explicit CarProcess(std::shared_ptr<const FermionWindow> window) : window_(std::move(window)) {}

  const FermionWindow& window() const { return *window_; }
  const std::shared_ptr<const FermionWindow>& window_ptr() const { return window_; }

  FermionOperator operator()(ProcessSymbol s, int n) const;
  bool in_window(int n) const;

 private:
  std::shared_ptr<const FermionWindow> window_;
};

/// Ordered product y_1 ... y_m with y_i the dictionary image of symbols[i] at
/// sites[i]: "a" -> a, "a*" -> a*, "a*a" -> a*a, "aa*" -> a a*.
FermionOperator odot(const FermionWindow& window, const std::vector<std::string>& symbols,
                     const std::vector<int>& sites);

struct RelationReport {
  double adjoint = 0.0;           ///< ||j(a*)(n) - j(a)(n)*||
  double min_anticommutator = 0.0;///< ||A_n A_m* + A_m* A_n - min(n, m) 1|| over n, m >= 1
  double anticommutator = 0.0;    ///< ||A_n A_m + A_m A_n||
  double unit_identity = 0.0;     ///< ||A_n* A_n + A_n A_n* - n 1||
  double number_commutator = 0.0; ///< ||[Lambda_n, A_n] + A_n||
  double number_commutator_star = 0.0;  ///< ||[Lambda_n, A_n*] - A_n*||
  double additivity = 0.0;        ///< max over symbols of ||X_{m+n} - X_m - a_m(X_n)||
  double car = 0.0;
  bool parity_ok = false;         ///< A_n odd, Lambda_n even
  std::vector<double> witness;    ///< ||Lambda_n - A_n* A_n|| for n = 1..
  int max_time = 0;
};

/// All relations for 1 <= n, m <= sites in (0, hi]. The witness norms are
/// computed on the sub-window [1, n].
RelationReport verify_relations(const CarProcess& process);

/// Degree-1 operator cochain t -> X_t for one process symbol.
class FermionModule {
 public:
  using Value = FermionOperator;

  explicit FermionModule(std::shared_ptr<const FermionWindow> window) : window_(std::move(window)) {}

  Value act(int t, const Value& x) const { return window_->shift(x, t); }
  double norm(const Value& x) const { return x.max_entry(); }
  const FermionWindow& window() const { return *window_; }

 private:
  std::shared_ptr<const FermionWindow> window_;
};

Cochain<FermionModule> process_cochain(std::shared_ptr<const FermionModule> module, const CarProcess& process,
                                       ProcessSymbol symbol);

}  // namespace qcohom
