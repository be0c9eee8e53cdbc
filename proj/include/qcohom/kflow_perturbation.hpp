#pragma once

// Perturbations of the CAR shift flow by markovian multiplicative
// a-cocycles generated from one even local unitary: filtration algebras, the
// perturbed process and automorphisms, the localization and independence
// checks, the finite-window Powers-shift proxy and the conjugacy theta.
//
// Site conventions: N_{t]} lives on sites <= t, N_{[t} on sites >= t+1.

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "qcohom/car_flow.hpp"

namespace qcohom {

class LocalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generators a_k, a_k* of the window sites in [first, last] (clipped).
std::vector<FermionOperator> generators(const FermionWindow& window, int first, int last);

/// Residual of x being in the algebra of sites <= t: the even part must
/// commute and the odd part anticommute with every generator at a site > t.
/// 0 means membership.
double past_membership_residual(const FermionWindow& window, const FermionOperator& x, int t);
/// Same for sites >= t + 1.
double future_membership_residual(const FermionWindow& window, const FermionOperator& x, int t);

/// W_n = w a_1(w) ... a_{n-1}(w), W_{-n} = a_{-1}(w*) ... a_{-n}(w*), W_0 = 1.
class AlgebraCocycle {
 public:
  struct Options {
    double tolerance = 1e-12;
    bool allow_odd = false;  ///< negative controls only
  };

  AlgebraCocycle(std::shared_ptr<const FermionWindow> window, FermionOperator w, int horizon);
  AlgebraCocycle(std::shared_ptr<const FermionWindow> window, FermionOperator w, int horizon, Options options);

  const FermionWindow& window() const { return *window_; }
  const FermionOperator& generator() const { return w_; }
  int horizon() const { return horizon_; }
  /// Whether W_t fits the window (its hull is tracked exactly).
  bool available(int t) const;
  const FermionOperator& at(int t) const;

  /// Largest K with W_{-K} in the window.
  int past_depth() const;

  double cocycle_residual() const { return cocycle_residual_; }
  double unitarity_residual() const { return unitarity_residual_; }
  /// max ||W_n x W_n* - x|| over generators at sites >= n, n = 0..horizon.
  double markovian_residual() const { return markovian_residual_; }
  /// max membership residual of W_n N_{n]} W_n* in N_{n]}.
  double past_invariance_residual() const { return past_invariance_residual_; }
  int checked_pairs() const { return checked_pairs_; }
  bool odd_generator() const { return odd_; }

 private:
  std::shared_ptr<const FermionWindow> window_;
  FermionOperator w_;
  int horizon_;
  bool odd_ = false;
  std::map<int, FermionOperator> family_;
  double cocycle_residual_ = 0.0;
  double unitarity_residual_ = 0.0;
  double markovian_residual_ = 0.0;
  double past_invariance_residual_ = 0.0;
  int checked_pairs_ = 0;
};

/// w = 1 + (e^{i theta} - 1) a_site* a_site.
FermionOperator phase_unitary(const FermionWindow& window, int site, double theta);

class PerturbedProcess {
 public:
  PerturbedProcess(CarProcess process, std::shared_ptr<const AlgebraCocycle> cocycle);

  /// j~(x)(n): unchanged for n >= 0, W_n j(x)(n) W_n* for n < 0.
  FermionOperator operator()(ProcessSymbol s, int n) const;
  /// a~_m(y) = W_m a_m(y) W_m*.
  FermionOperator alpha(const FermionOperator& y, int m) const;

  const CarProcess& process() const { return process_; }
  const AlgebraCocycle& cocycle() const { return *cocycle_; }

 private:
  CarProcess process_;
  std::shared_ptr<const AlgebraCocycle> cocycle_;
};

struct AdditivityReport {
  double residual = 0.0;           ///< all computable (m, n) pairs
  double negative_residual = 0.0;  ///< pairs with m, n < 0
  double future_unchanged = 0.0;   ///< ||j~(n) - j(n)||, n >= 0
  int pairs = 0;
};

AdditivityReport verify_perturbed_additivity(const PerturbedProcess& p);

struct LocalizationReport {
  double future_residual = 0.0;  ///< a~_m = a_m on generators of N_{[0}, m >= 0
  double past_residual = 0.0;    ///< a~_{-m} = a_{-m} on generators of N_{[m}, m >= 0
  int depth = 0;                 ///< localization depth of w (sites below 0 it touches)
  int checked = 0;
};

LocalizationReport verify_localization(const PerturbedProcess& p);

struct IndependenceReport {
  double residual = 0.0;          ///< max |phi(xy) - phi(x)phi(y)|, disjoint ranges
  double negative_control = 0.0;  ///< same for overlapping elements
  int samples = 0;
};

/// phi = normalized trace; x from N_{[t}, y from N_{t]} for cuts t across
/// the window, random polynomials in the generators.
IndependenceReport independence_check(const FermionWindow& window, std::mt19937_64& rng, int samples = 40);

struct PowersShiftReport {
  int depth = 0;
  double shift_residual = 0.0;          ///< beta_n(N_{0]}) generators vs N_{-n]} generators
  bool chain_decreasing = false;        ///< generators of N_{-n-1]} lie in N_{-n]}
  std::vector<int> algebra_dims;        ///< dim of N_{-n]} on the window, n = 0..depth
  int intersection_dim = 0;             ///< brute-force graded commutant count; 1 = scalars
};

/// Finite-window proxy on sites [-depth+1, 0].
PowersShiftReport powers_shift_check(int depth);

/// max membership residual of W_n x W_n* in N_{n]} over generators x of
/// N_{n]} in the window, n = 0..horizon.
double perturbed_filtration_residual(const AlgebraCocycle& w);

struct ConjugacyReport {
  double left_inverse = 0.0;     ///< theta+ theta = id
  double right_inverse = 0.0;    ///< theta theta+ = id on the image
  double intertwining = 0.0;     ///< beta~_n theta = theta beta_n
  double stabilization = 0.0;    ///< W_{-s(x)} vs W_{-K} conjugation
  int checked = 0;
  std::vector<std::string> skipped;  ///< elements whose localization was too deep
};

class Conjugacy {
 public:
  explicit Conjugacy(std::shared_ptr<const AlgebraCocycle> w);

  /// Stabilization index: W_{-n} x W_{-n}* is constant for n >= s(x).
  int stabilization_index(const FermionOperator& x) const;
  FermionOperator theta(const FermionOperator& x) const;
  FermionOperator theta_plus(const FermionOperator& y) const;
  /// beta~_n(y) = W_{-n} a_{-n}(y) W_{-n}*.
  FermionOperator beta_tilde(const FermionOperator& y, int n) const;

  ConjugacyReport verify(const std::vector<FermionOperator>& elements, int max_n) const;

 private:
  std::shared_ptr<const AlgebraCocycle> w_;
};

/// Interior elements of N_{0]} used by the acceptance suite: a_{-1},
/// a_{-2}* a_{-2}, a_{-1} a_{-2}*, n_{-3}.
std::vector<FermionOperator> interior_elements(const FermionWindow& window);

}  // namespace qcohom
