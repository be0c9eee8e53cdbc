#include "qcohom/core_lattice.hpp"

#include <cmath>

namespace qcohom {

namespace {

std::optional<std::pair<int, int>> find_support(const Vector& amps, int first_site) {
  int lo = -1;
  int hi = -1;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if (amps[i] != Complex(0.0, 0.0)) {
      if (lo < 0) lo = static_cast<int>(i);
      hi = static_cast<int>(i);
    }
  }
  if (lo < 0) return std::nullopt;
  return std::make_pair(lo + first_site, hi + first_site);
}

void require_positive_width(int half_width) {
  if (half_width <= 0) throw std::invalid_argument("window half-width must be positive");
}

}  // namespace

LatticeVector::LatticeVector(int half_width)
    : LatticeVector(half_width, Vector::Zero(2 * static_cast<Eigen::Index>(half_width))) {}

LatticeVector::LatticeVector(int half_width, Vector amplitudes)
    : half_width_(half_width), amplitudes_(std::move(amplitudes)) {
  require_positive_width(half_width);
  if (amplitudes_.size() != 2 * half_width) {
    throw std::invalid_argument("amplitude array length must equal 2N");
  }
  support_ = find_support(amplitudes_, -half_width_);
}

LatticeVector LatticeVector::basis(int half_width, int site) {
  require_positive_width(half_width);
  if (site < -half_width || site >= half_width) {
    throw WindowOverflowError("basis site " + std::to_string(site) + " outside window");
  }
  Vector amps = Vector::Zero(2 * half_width);
  amps[site + half_width] = 1.0;
  return LatticeVector(half_width, std::move(amps));
}

Complex LatticeVector::operator[](int site) const {
  if (!contains(site)) return {0.0, 0.0};
  return amplitudes_[site + half_width_];
}

double LatticeVector::norm_squared() const { return amplitudes_.squaredNorm(); }

double LatticeVector::norm() const { return std::sqrt(norm_squared()); }

LatticeVector LatticeVector::operator+(const LatticeVector& other) const {
  if (other.half_width_ != half_width_) throw std::invalid_argument("window mismatch");
  return LatticeVector(half_width_, amplitudes_ + other.amplitudes_);
}

LatticeVector LatticeVector::operator-(const LatticeVector& other) const {
  if (other.half_width_ != half_width_) throw std::invalid_argument("window mismatch");
  return LatticeVector(half_width_, amplitudes_ - other.amplitudes_);
}

LatticeVector LatticeVector::operator-() const { return LatticeVector(half_width_, -amplitudes_); }

LatticeVector LatticeVector::operator*(Complex scale) const {
  return LatticeVector(half_width_, amplitudes_ * scale);
}

LatticeVector shift(const LatticeVector& v, int m) {
  const int n = v.half_width();
  if (!v.support()) return v;
  const auto [lo, hi] = *v.support();
  if (lo - m < -n || hi - m >= n) {
    throw WindowOverflowError("shift by " + std::to_string(m) + " moves support [" +
                              std::to_string(lo) + ", " + std::to_string(hi) +
                              "] outside the window of half-width " + std::to_string(n));
  }
  Vector out = Vector::Zero(2 * n);
  for (int k = lo - m; k <= hi - m; ++k) out[k + n] = v[k + m];
  return LatticeVector(n, std::move(out));
}

LatticeVector chi(int half_width, int n) {
  require_positive_width(half_width);
  if (n >= half_width || n <= -half_width) {
    throw WindowOverflowError("chi_" + std::to_string(n) + " needs |n| < N = " +
                              std::to_string(half_width));
  }
  Vector amps = Vector::Zero(2 * half_width);
  if (n > 0) {
    for (int k = -n; k < 0; ++k) amps[k + half_width] = 1.0;
  } else {
    for (int k = 0; k < -n; ++k) amps[k + half_width] = -1.0;
  }
  return LatticeVector(half_width, std::move(amps));
}

std::string to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::general: return "general";
    case OperatorTag::unitary: return "unitary";
    case OperatorTag::isometry: return "isometry";
    case OperatorTag::lower_triangular_toeplitz: return "lower-triangular-toeplitz";
  }
  return "general";
}

double unitarity_residual(const Matrix& u) {
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  return std::max(max_abs(u.adjoint() * u - id), max_abs(u * u.adjoint() - id));
}

double isometry_residual(const Matrix& v) {
  return max_abs(v.adjoint() * v - Matrix::Identity(v.cols(), v.cols()));
}

LatticeOperator::LatticeOperator(Matrix matrix, int first_site, OperatorTag tag, double tolerance)
    : matrix_(std::move(matrix)), first_site_(first_site), tag_(tag), tolerance_(tolerance) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("operator must be square");
  switch (tag_) {
    case OperatorTag::unitary:
      if (unitarity_residual(matrix_) > tolerance_) {
        throw std::invalid_argument("operator tagged unitary fails ||U*U - I|| <= tolerance");
      }
      break;
    case OperatorTag::isometry:
      if (isometry_residual(matrix_) > tolerance_) {
        throw std::invalid_argument("operator tagged isometry fails ||V*V - I|| <= tolerance");
      }
      break;
    case OperatorTag::lower_triangular_toeplitz:
      for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
          if (matrix_(i, j) != Complex(0.0, 0.0)) {
            throw std::invalid_argument("operator tagged lower-triangular has entries above the diagonal");
          }
        }
      }
      break;
    case OperatorTag::general: break;
  }
}

LatticeOperator LatticeOperator::identity(int half_width) {
  require_positive_width(half_width);
  return LatticeOperator(Matrix::Identity(2 * half_width, 2 * half_width), -half_width,
                         OperatorTag::unitary);
}

LatticeOperator LatticeOperator::shift_operator(int half_width, int m) {
  require_positive_width(half_width);
  const int dim = 2 * half_width;
  Matrix s = Matrix::Zero(dim, dim);
  for (int j = -half_width; j < half_width; ++j) {
    const int target = j - m;
    if (target >= -half_width && target < half_width) s(target + half_width, j + half_width) = 1.0;
  }
  return LatticeOperator(std::move(s), -half_width);
}

LatticeVector LatticeOperator::apply(const LatticeVector& v) const {
  if (first_site_ != v.first_site() || dimension() != v.amplitudes().size()) {
    throw std::invalid_argument("operator and vector live on different windows");
  }
  return LatticeVector(v.half_width(), matrix_ * v.amplitudes());
}

LatticeOperator head_projection(int half_width, int n) {
  if (n < 0 || n > half_width) throw std::out_of_range("head_projection needs 0 <= n <= N");
  Matrix p = Matrix::Zero(2 * half_width, 2 * half_width);
  for (int k = 0; k < n; ++k) p(k + half_width, k + half_width) = 1.0;
  return LatticeOperator(std::move(p), -half_width);
}

LatticeOperator tail_projection(int half_width, int n) {
  if (n < 0 || n > half_width) throw std::out_of_range("tail_projection needs 0 <= n <= N");
  Matrix p = Matrix::Zero(2 * half_width, 2 * half_width);
  for (int k = n; k < half_width; ++k) p(k + half_width, k + half_width) = 1.0;
  return LatticeOperator(std::move(p), -half_width);
}

Matrix conjugate_by_shift(const Matrix& a, int half_width, int t) {
  const int dim = 2 * half_width;
  Matrix out = Matrix::Zero(dim, dim);
  // rows i with i+t in range, columns likewise
  const int lo = std::max(0, -t);
  const int hi = std::min(dim, dim - t);
  if (hi <= lo) return out;
  out.block(lo, lo, hi - lo, hi - lo) = a.block(lo + t, lo + t, hi - lo, hi - lo);
  return out;
}

Matrix basis_block(int half_width, int first, int last) {
  if (first < -half_width || last > half_width || last < first) {
    throw WindowOverflowError("basis block outside the window");
  }
  Matrix e = Matrix::Zero(2 * half_width, last - first);
  for (int k = first; k < last; ++k) e(k + half_width, k - first) = 1.0;
  return e;
}

}  // namespace qcohom
