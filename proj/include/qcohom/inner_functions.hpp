#pragma once

// Inner functions on the unit disc (Blaschke part, singular atoms, phase),
// their Taylor coefficients, the multiplication isometry M_Theta as a
// lower-triangular Toeplitz matrix on H_0, and the model space
// K_Theta = H_0 minus M_Theta H_0 together with a unitary R acting on it.

#include <stdexcept>
#include <vector>

#include "qcohom/core_lattice.hpp"

namespace qcohom {

struct SingularAtom {
  double angle = 0.0;  ///< boundary point e^{i angle}
  double mass = 0.0;   ///< s > 0
};

class GridResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IllConditionedSpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InnerFunction {
 public:
  /// Throws std::invalid_argument for |phase| != 1, zeros outside the open
  /// disc, or nonpositive atom masses.
  InnerFunction(Complex phase, std::vector<Complex> zeros, std::vector<SingularAtom> atoms = {});

  static InnerFunction constant(Complex phase) { return InnerFunction(phase, {}); }
  /// Theta(z) = z.
  static InnerFunction identity() { return InnerFunction(1.0, {Complex(0.0, 0.0)}); }

  Complex phase() const { return phase_; }
  const std::vector<Complex>& zeros() const { return zeros_; }
  const std::vector<SingularAtom>& atoms() const { return atoms_; }

  int blaschke_degree() const { return static_cast<int>(zeros_.size()); }
  /// Singular atoms have no finite-dimensional model space.
  bool truncation_sensitive() const { return !atoms_.empty(); }

  Complex operator()(Complex z) const;

  InnerFunction operator*(const InnerFunction& other) const;

  /// max | |Theta| - 1 | over a boundary grid, skipping points within
  /// `exclusion` radians of any singular atom.
  double boundary_modulus_defect(int grid_points = 4096, double exclusion = 0.05) const;

 private:
  Complex phase_;
  std::vector<Complex> zeros_;
  std::vector<SingularAtom> atoms_;
};

/// Blaschke factor with the normalization b_a(0) >= 0 (b_0(z) = z).
Complex blaschke_factor(Complex a, Complex z);

/// First `count` power-series coefficients from boundary samples and a
/// discrete Fourier transform, with grid-doubling error control.
std::vector<Complex> taylor_coefficients(const InnerFunction& theta, int count);

struct ToeplitzMultiplier {
  LatticeOperator op;               ///< N x N on span{e_0..e_{N-1}}
  double interior_isometry_defect;  ///< ||(M*M - I) on the first N/2 coordinates||_max
  double isometry_defect;           ///< same over the whole block; nonzero in the last rows
};

ToeplitzMultiplier toeplitz_multiplier(const InnerFunction& theta, int half_width);

struct ModelSpace {
  InnerFunction theta;
  int half_width;
  Matrix basis;               ///< N x dim, orthonormal columns spanning K_Theta in the window
  Vector defect_spectrum;     ///< eigenvalues of I - M M*, ascending
  double truncation_defect;   ///< ||P_K(N) - P_K(N/2)||_max on the first N/2 coordinates
  double orthogonality;       ///< max |<u, M e_k>| over k < N - N/4

  int dimension() const { return static_cast<int>(basis.cols()); }
  Matrix projection() const { return basis * basis.adjoint(); }
};

ModelSpace model_space(const InnerFunction& theta, int half_width);

/// R on H_0 in the window: the prescribed eigenvalues on the model-space
/// basis and the identity on its orthocomplement.
class ModelSpaceUnitary {
 public:
  ModelSpaceUnitary(ModelSpace space, std::vector<Complex> eigenvalues);

  const ModelSpace& space() const { return space_; }
  const std::vector<Complex>& eigenvalues() const { return eigenvalues_; }
  const LatticeOperator& op() const { return op_; }

  /// R^n on H_0 in the window.
  Matrix power(int n) const;
  /// R^n P_K.
  Matrix power_on_space(int n) const;

 private:
  ModelSpace space_;
  std::vector<Complex> eigenvalues_;
  LatticeOperator op_;
};

}  // namespace qcohom
