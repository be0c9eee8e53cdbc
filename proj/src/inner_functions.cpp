#include "qcohom/inner_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace qcohom {

namespace {

constexpr double kDiscTolerance = 1e-12;
constexpr double kCoefficientDrift = 1e-9;

std::vector<Complex> sample_coefficients(const InnerFunction& theta, int grid, int count) {
  std::vector<Complex> samples(static_cast<size_t>(grid));
  for (int j = 0; j < grid; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / grid;
    samples[static_cast<size_t>(j)] = theta(std::polar(1.0, angle));
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, samples);
  std::vector<Complex> out(spectrum.begin(), spectrum.begin() + count);
  for (auto& c : out) c /= static_cast<double>(grid);
  return out;
}

// Projection onto the eigenvectors of I - M M* above 1/2.
struct DefectEigen {
  Matrix basis;
  Vector spectrum;
};

DefectEigen defect_eigen(const Matrix& m) {
  const Eigen::Index n = m.rows();
  const Matrix defect = Matrix::Identity(n, n) - m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(defect);
  const Eigen::VectorXd& values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - 0.5) < 0.25) {
      throw IllConditionedSpaceError(
          "defect projection has an eigenvalue near 1/2 (" + std::to_string(values[i]) +
          "); enlarge the window");
    }
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] > 0.5) kept.push_back(i);
  }
  Matrix basis(n, static_cast<Eigen::Index>(kept.size()));
  for (size_t c = 0; c < kept.size(); ++c) {
    Vector v = solver.eigenvectors().col(kept[c]);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    v *= std::conj(v[pivot]) / std::abs(v[pivot]);
    basis.col(static_cast<Eigen::Index>(c)) = v;
  }
  return {basis, values.cast<Complex>()};
}

}  // namespace

Complex blaschke_factor(Complex a, Complex z) {
  if (std::abs(a) == 0.0) return z;
  return (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
}

InnerFunction::InnerFunction(Complex phase, std::vector<Complex> zeros,
                             std::vector<SingularAtom> atoms)
    : phase_(phase), zeros_(std::move(zeros)), atoms_(std::move(atoms)) {
  if (std::abs(std::abs(phase_) - 1.0) > kDiscTolerance) {
    throw std::invalid_argument("inner function phase must be unimodular");
  }
  for (const auto& a : zeros_) {
    if (!(std::abs(a) < 1.0)) throw std::invalid_argument("Blaschke zeros must lie in the open unit disc");
  }
  for (const auto& atom : atoms_) {
    if (!(atom.mass > 0.0)) throw std::invalid_argument("singular atom masses must be positive");
  }
}

Complex InnerFunction::operator()(Complex z) const {
  Complex value = phase_;
  for (const auto& a : zeros_) value *= blaschke_factor(a, z);
  for (const auto& atom : atoms_) {
    const Complex zeta = std::polar(1.0, atom.angle);
    const Complex gap = zeta - z;
    // radial limit at the atom itself
    if (std::abs(gap) < 1e-300) return {0.0, 0.0};
    value *= std::exp(-atom.mass * (zeta + z) / gap);
  }
  return value;
}

InnerFunction InnerFunction::operator*(const InnerFunction& other) const {
  std::vector<Complex> zeros = zeros_;
  zeros.insert(zeros.end(), other.zeros_.begin(), other.zeros_.end());
  std::vector<SingularAtom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  return InnerFunction(phase_ * other.phase_, std::move(zeros), std::move(atoms));
}

double InnerFunction::boundary_modulus_defect(int grid_points, double exclusion) const {
  double worst = 0.0;
  for (int j = 0; j < grid_points; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / grid_points;
    bool near_atom = false;
    for (const auto& atom : atoms_) {
      const double gap = std::remainder(angle - atom.angle, 2.0 * std::numbers::pi);
      if (std::abs(gap) < exclusion) near_atom = true;
    }
    if (near_atom) continue;
    worst = std::max(worst, std::abs(std::abs((*this)(std::polar(1.0, angle))) - 1.0));
  }
  return worst;
}

std::vector<Complex> taylor_coefficients(const InnerFunction& theta, int count) {
  if (count <= 0) return {};
  if (count > (1 << 16)) throw std::invalid_argument("taylor_coefficients supports at most 2^16 terms");
  int grid = 64;
  while (grid < 4 * count) grid *= 2;
  const auto coarse = sample_coefficients(theta, grid, count);
  auto fine = sample_coefficients(theta, 2 * grid, count);
  double drift = 0.0;
  for (int m = 0; m < count; ++m) {
    drift = std::max(drift, std::abs(coarse[static_cast<size_t>(m)] - fine[static_cast<size_t>(m)]));
  }
  if (drift > kCoefficientDrift) {
    throw GridResolutionError("coefficient drift " + std::to_string(drift) +
                              " under grid doubling; singular part too stiff for " +
                              std::to_string(count) + " coefficients");
  }
  double energy = 0.0;
  for (const auto& c : fine) energy += std::norm(c);
  if (energy > 1.0 + 1e-8) {
    throw GridResolutionError("coefficient energy exceeds 1: " + std::to_string(energy));
  }
  return fine;
}

ToeplitzMultiplier toeplitz_multiplier(const InnerFunction& theta, int half_width) {
  if (half_width <= 0) throw std::invalid_argument("window half-width must be positive");
  const auto coeffs = taylor_coefficients(theta, half_width);
  Matrix m = Matrix::Zero(half_width, half_width);
  for (int col = 0; col < half_width; ++col) {
    for (int row = col; row < half_width; ++row) m(row, col) = coeffs[static_cast<size_t>(row - col)];
  }
  const Matrix gram = m.adjoint() * m - Matrix::Identity(half_width, half_width);
  const int interior = std::max(1, half_width / 2);
  ToeplitzMultiplier out{LatticeOperator(m, 0, OperatorTag::lower_triangular_toeplitz),
                         max_abs(gram.topLeftCorner(interior, interior)), max_abs(gram)};
  return out;
}

ModelSpace model_space(const InnerFunction& theta, int half_width) {
  if (half_width < 2) throw std::invalid_argument("model_space needs N >= 2");
  const Matrix m = toeplitz_multiplier(theta, half_width).op.matrix();
  auto full = defect_eigen(m);

  const int half = half_width / 2;
  const Matrix m_half = toeplitz_multiplier(theta, half).op.matrix();
  const auto coarse = defect_eigen(m_half);
  const Matrix p_full = full.basis * full.basis.adjoint();
  const Matrix p_half = coarse.basis * coarse.basis.adjoint();
  const double truncation = max_abs(p_full.topLeftCorner(half, half) - p_half);

  const int checked = half_width - half_width / 4;
  const double orthogonality =
      full.basis.cols() == 0 ? 0.0 : max_abs(full.basis.adjoint() * m.leftCols(checked));

  return ModelSpace{theta, half_width, std::move(full.basis), std::move(full.spectrum), truncation,
                    orthogonality};
}

ModelSpaceUnitary::ModelSpaceUnitary(ModelSpace space, std::vector<Complex> eigenvalues)
    : space_(std::move(space)),
      eigenvalues_(std::move(eigenvalues)),
      op_(Matrix::Identity(1, 1), 0) {
  if (static_cast<int>(eigenvalues_.size()) != space_.dimension()) {
    throw std::invalid_argument("expected " + std::to_string(space_.dimension()) +
                                " eigenvalues for the model space, got " +
                                std::to_string(eigenvalues_.size()));
  }
  for (const auto& l : eigenvalues_) {
    if (std::abs(std::abs(l) - 1.0) > 1e-12) throw std::invalid_argument("R eigenvalues must be unimodular");
  }
  const int n = space_.half_width;
  Matrix r = Matrix::Identity(n, n);
  for (int i = 0; i < space_.dimension(); ++i) {
    const Vector u = space_.basis.col(i);
    r += (eigenvalues_[static_cast<size_t>(i)] - 1.0) * u * u.adjoint();
  }
  op_ = LatticeOperator(std::move(r), 0, OperatorTag::unitary, 1e-10);
}

Matrix ModelSpaceUnitary::power(int n) const {
  const int dim = space_.half_width;
  Matrix out = Matrix::Identity(dim, dim);
  for (int i = 0; i < space_.dimension(); ++i) {
    const Vector u = space_.basis.col(i);
    out += (std::pow(eigenvalues_[static_cast<size_t>(i)], n) - 1.0) * u * u.adjoint();
  }
  return out;
}

Matrix ModelSpaceUnitary::power_on_space(int n) const {
  const int dim = space_.half_width;
  Matrix out = Matrix::Zero(dim, dim);
  for (int i = 0; i < space_.dimension(); ++i) {
    const Vector u = space_.basis.col(i);
    out += std::pow(eigenvalues_[static_cast<size_t>(i)], n) * u * u.adjoint();
  }
  return out;
}

}  // namespace qcohom
