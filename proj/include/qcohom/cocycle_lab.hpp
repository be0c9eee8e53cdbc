#pragma once

// Multiplicative cocycles of the shift group on the lattice window, the
// markovian constructor from an inner function and a unitary on its model
// space, the associated isometry semigroup, its Wold decomposition, the limit
// cocycle W_{-inf}, the zeta/xi objects behind the defect-index argument and
// Hilbert-Schmidt convergence diagnostics.
//
// Residuals are measured on the central check region |k| < N/4 unless stated
// otherwise; truncation at the window edge never reaches it for the
// geometrically decaying constructions used here.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qcohom/core_lattice.hpp"
#include "qcohom/inner_functions.hpp"

namespace qcohom {

class NonMarkovianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundaryContaminationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonStabilizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n -> W_{-n} (n >= 0) on the full window; W_n for n > 0 is always derived
/// as S_n W_{-n}* S_{-n}.
class MultiplicativeCocycle {
 public:
  using Rule = std::function<Matrix(int n)>;

  static MultiplicativeCocycle from_rule(int half_width, int horizon, Rule rule, std::string label);
  /// past[n] = W_{-n} for n = 0..horizon.
  static MultiplicativeCocycle from_family(int half_width, std::vector<Matrix> past, std::string label);

  int half_width() const { return half_width_; }
  int horizon() const { return static_cast<int>(past_.size()) - 1; }
  const std::string& label() const { return label_; }
  bool has_rule() const { return static_cast<bool>(rule_); }

  /// W_t. Negative times beyond the stored horizon are produced by the rule.
  Matrix at(int t) const;

  /// Markovian flag, set only through certify_markovian.
  std::optional<double> markovian_tolerance() const { return markovian_tolerance_; }

  /// Copy carrying the markovian flag if verify_markovian passes at `tolerance`
  /// over the stored horizon; throws NonMarkovianError otherwise.
  MultiplicativeCocycle certify_markovian(double tolerance = kDefaultTolerance) const;

 private:
  MultiplicativeCocycle() = default;

  int half_width_ = 0;
  std::vector<Matrix> past_;
  Rule rule_;
  std::string label_;
  std::optional<double> markovian_tolerance_;
};

MultiplicativeCocycle trivial_cocycle(int half_width, int horizon = 6);

/// W_t = J S_t J* S_{-t}.
MultiplicativeCocycle coboundary_cocycle(const LatticeOperator& j, int horizon = 6);

/// Haar-random unitary on sites [-block/2, block/2), identity elsewhere.
LatticeOperator random_local_unitary(int half_width, int block, std::mt19937_64& rng);

enum class ConstructorForm { corrected, literal };

/// Markovian cocycle from an inner function Theta and a unitary R on K_Theta.
/// Corrected form: W_{-n} is the identity on negative sites, M_Theta on
/// span{e_0..e_{n-1}} and (R^n P_K + M S'^n M* P_V) S_n on span{e_k : k >= n}.
/// Literal form: (R^n P_K S_n + P_V) P_[n,inf) + M P_[0,n] with no correction;
/// it is not unitary and exists to document that.
MultiplicativeCocycle markovian_from_inner(const ModelSpaceUnitary& r, int horizon = 6,
                                           ConstructorForm form = ConstructorForm::corrected);

struct CocycleReport {
  double cocycle_residual = 0.0;    ///< max ||W_{m+n} - W_m S_m W_n S_{-m}||
  double adjoint_residual = 0.0;    ///< max ||W_{-n} - S_{-n} W_n* S_n||
  double unitarity_residual = 0.0;  ///< max over |n| <= horizon on the check block
  double identity_at_zero = 0.0;    ///< ||W_0 - I||
  int worst_m = 0;
  int worst_n = 0;
};

CocycleReport verify_cocycle(const MultiplicativeCocycle& w, int horizon);

struct MarkovianReport {
  double future_residual = 0.0;  ///< max_n ||(W_n - I) on span{e_k : k < -n}||
  double past_residual = 0.0;    ///< max_n ||(W_{-n} - I) on span{e_k : k < 0}||
  double residual() const { return std::max(future_residual, past_residual); }
};

MarkovianReport verify_markovian(const MultiplicativeCocycle& w, int horizon);

/// V_1 = W_{-1} S_{-1} restricted to H_0 in the window (N x N).
class IsometrySemigroup {
 public:
  explicit IsometrySemigroup(Matrix generator, int half_width);

  const Matrix& generator() const { return generator_; }
  int half_width() const { return half_width_; }
  Matrix power(int n) const;

  double interior_isometry_defect = 0.0;  ///< ||V*V - I|| on the first N/2 coordinates
  double semigroup_residual = 0.0;        ///< max_n ||V^n - W_{-n}S_{-n}|_{H_0}|| on interior columns
  double leakage = 0.0;                   ///< mass V sends to negative sites

 private:
  Matrix generator_;
  int half_width_;
};

/// Throws NonMarkovianError unless the cocycle carries the markovian flag.
IsometrySemigroup associated_isometry(const MultiplicativeCocycle& w);

struct WoldData {
  Matrix unitary_basis;     ///< H^(0): N x d0
  Matrix shift_basis;       ///< H^(1): orthonormalized {V^n d}, n < N/2
  Matrix unitary_part;      ///< V compressed to H^(0), d0 x d0
  Eigen::VectorXcd unitary_eigenvalues;
  int defect_index = 0;         ///< dim(H_0 minus V H_0) from interior defect vectors
  int rank_defect_index = 0;    ///< N - rank(V), singular-value cutoff 1e-8
  int boundary_modes = 0;       ///< defect eigenvectors discarded as edge artifacts
  int stabilized_at = 0;        ///< first n after which the intersection dimension is constant
  std::vector<int> intersection_dims;  ///< dimension of range(V^n) on the interior, n = 1..n_max
  Eigen::VectorXd defect_spectrum;     ///< eigenvalues of I - VV*
  double mutual_orthogonality = 0.0;   ///< ||H0* H1||_max
  double unitary_invariance = 0.0;     ///< ||(I - P0) V H0||_max
  double shift_invariance = 0.0;       ///< ||(I - P1) V H1||_max on all but the last column
  double shift_forward = 0.0;          ///< Gram residual of the raw {V^n d} family
};

WoldData wold_decompose(const IsometrySemigroup& v);

struct LimitReport {
  LatticeOperator limit;               ///< W_{-inf} on H_0 in the window
  double stabilization_residual = 0.0; ///< max_{n > k} ||W_{-n}e_k - W_{-(k+1)}e_k||
  double range_residual = 0.0;         ///< ||P_range - P_{H^(1)}|| on the interior block
  double isometry_defect = 0.0;        ///< interior ||L*L - I||
  int steps_checked = 0;
};

/// Requires a markovian cocycle with a rule (W_{-n} is needed for all n <= N).
LimitReport limit_cocycle(const MultiplicativeCocycle& w);

struct ZetaXiReport {
  std::vector<LatticeVector> zeta;  ///< zeta_n = W_{-n} chi_{-n}, n = 0..horizon
  LatticeVector xi;
  double additive_residual = 0.0;      ///< max ||zeta_{m+n} - zeta_m - V_m zeta_n||
  double orthogonality_residual = 0.0; ///< max |(V_{kn} zeta_n, zeta_n)|, k >= 1
  double eigen_residual = 0.0;         ///< ||V* xi - e^{-1} xi||_max
  double tail_bound = 0.0;             ///< e^{-horizon}
};

ZetaXiReport zeta_xi(const MultiplicativeCocycle& w, int horizon);

struct HsSeries {
  std::vector<int> truncations;
  std::vector<double> values;      ///< ||(W_n - I) on sites [-T/2, T/2)||_F
  std::vector<double> increments;  ///< increments[i-1] = |values[i] - values[i-1]|
  bool monotone = false;
  bool passed = false;             ///< monotone increments ending below the Cauchy threshold
};

inline constexpr double kHsCauchyThreshold = 1e-6;

HsSeries hs_distance(const MultiplicativeCocycle& w, int n, const std::vector<int>& truncations);

/// ||W_n S_n - J S_n J*|| on the check region for a coboundary built from J.
double coboundary_triviality(const MultiplicativeCocycle& w, const LatticeOperator& j, int horizon);

}  // namespace qcohom
