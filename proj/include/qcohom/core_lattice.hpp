#pragma once

// Finite-window model of L^2 over the integer lattice: vectors and dense
// operators indexed by sites k in [-N, N), the shift group, the additive
// cocycle chi and the head/tail projections of the future subspaces.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace qcohom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTolerance = 1e-10;

/// Raised when an operation would move support outside the window; the
/// caller has to enlarge N.
class WindowOverflowError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Largest |entry| of a matrix or vector (0 for empty objects).
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

class LatticeVector {
 public:
  explicit LatticeVector(int half_width);
  LatticeVector(int half_width, Vector amplitudes);

  static LatticeVector basis(int half_width, int site);

  int half_width() const { return half_width_; }
  int first_site() const { return -half_width_; }
  int end_site() const { return half_width_; }
  bool contains(int site) const { return site >= -half_width_ && site < half_width_; }

  Complex operator[](int site) const;
  const Vector& amplitudes() const { return amplitudes_; }

  /// Lowest and highest site with a nonzero amplitude; empty for the zero vector.
  const std::optional<std::pair<int, int>>& support() const { return support_; }

  double norm_squared() const;
  double norm() const;

  LatticeVector operator+(const LatticeVector& other) const;
  LatticeVector operator-(const LatticeVector& other) const;
  LatticeVector operator-() const;
  LatticeVector operator*(Complex scale) const;

 private:
  int half_width_;
  Vector amplitudes_;
  std::optional<std::pair<int, int>> support_;
};

/// (S_m v)(k) = v(k + m); e_j goes to e_{j-m}. Throws WindowOverflowError when
/// the shifted support leaves [-N, N).
LatticeVector shift(const LatticeVector& v, int m);

/// Additive cocycle chi_n: indicator of {-n, ..., -1} for n > 0 and
/// -(indicator of {0, ..., |n|-1}) for n < 0.
LatticeVector chi(int half_width, int n);

enum class OperatorTag { general, unitary, isometry, lower_triangular_toeplitz };

std::string to_string(OperatorTag tag);

/// Dense operator on a contiguous block of sites starting at first_site. The
/// full window uses first_site = -N; operators on H_0 use first_site = 0.
class LatticeOperator {
 public:
  LatticeOperator(Matrix matrix, int first_site, OperatorTag tag = OperatorTag::general,
                  double tolerance = kDefaultTolerance);

  static LatticeOperator identity(int half_width);
  /// Compression of S_m to the window: e_j -> e_{j-m}, dropping sites that leave.
  static LatticeOperator shift_operator(int half_width, int m);

  const Matrix& matrix() const { return matrix_; }
  int first_site() const { return first_site_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  OperatorTag tag() const { return tag_; }
  double tolerance() const { return tolerance_; }

  int index_of(int site) const { return site - first_site_; }
  Complex operator()(int row_site, int col_site) const {
    return matrix_(index_of(row_site), index_of(col_site));
  }

  LatticeVector apply(const LatticeVector& v) const;

 private:
  Matrix matrix_;
  int first_site_;
  OperatorTag tag_;
  double tolerance_;
};

/// ||U*U - I||_max and ||UU* - I||_max for a square matrix.
double unitarity_residual(const Matrix& u);
double isometry_residual(const Matrix& v);

/// Projection onto span{e_0, ..., e_{n-1}} (H_0 minus H_{-n}), full window.
LatticeOperator head_projection(int half_width, int n);
/// Projection onto span{e_k : n <= k < N} (H_{-n} in the window), full window.
LatticeOperator tail_projection(int half_width, int n);

/// S_t A S_{-t} for a full-window matrix: entry (i, j) becomes A(i+t, j+t),
/// zero where the source index falls outside the window.
Matrix conjugate_by_shift(const Matrix& a, int half_width, int t);

/// Columns e_k for first <= k < last of the full window, as a 2N x (last-first) block.
Matrix basis_block(int half_width, int first, int last);

/// Radius of the central check region used by residual sweeps: sites |k| < N/4.
inline int check_radius(int half_width) { return half_width / 4; }

}  // namespace qcohom
