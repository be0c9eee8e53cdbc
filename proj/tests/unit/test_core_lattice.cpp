#include <doctest.h>

#include <cmath>
#include <random>

#include "qcohom/core_lattice.hpp"

using namespace qcohom;

TEST_CASE("shift moves basis vectors down by m") {
  const auto e3 = LatticeVector::basis(8, 3);
  const auto s = shift(e3, 2);
  CHECK(s[1] == Complex(1.0, 0.0));
  CHECK(s[3] == Complex(0.0, 0.0));
  CHECK(shift(s, -2)[3] == Complex(1.0, 0.0));
}

TEST_CASE("shift refuses to leave the window") {
  const auto top = LatticeVector::basis(4, 3);
  CHECK_THROWS_AS(shift(top, -1), WindowOverflowError);
  const auto bottom = LatticeVector::basis(4, -4);
  CHECK_THROWS_AS(shift(bottom, 1), WindowOverflowError);
  CHECK_NOTHROW(shift(LatticeVector(4), 100));
}

TEST_CASE("chi indicator and its norm") {
  const int n = 32;
  for (int t = -10; t <= 10; ++t) {
    const auto c = chi(n, t);
    CHECK(c.norm_squared() == doctest::Approx(std::abs(t)));
  }
  CHECK(chi(n, 3)[-3] == Complex(1.0, 0.0));
  CHECK(chi(n, 3)[0] == Complex(0.0, 0.0));
  CHECK(chi(n, -2)[1] == Complex(-1.0, 0.0));
  // |chi_t - chi_s| = |t-s|^{1/2}; the doubled constant is not what the indicators give
  for (int t = -6; t <= 6; ++t) {
    for (int s = -6; s <= 6; ++s) {
      CHECK((chi(n, t) - chi(n, s)).norm() == doctest::Approx(std::sqrt(std::abs(t - s))));
    }
  }
}

TEST_CASE("chi is an additive S-cocycle inside the window") {
  const int n = 32;
  for (int t = -8; t <= 8; ++t) {
    for (int s = -8; s <= 8; ++s) {
      const auto lhs = chi(n, t + s);
      const auto rhs = chi(n, t) + shift(chi(n, s), t);
      CHECK(max_abs(lhs.amplitudes() - rhs.amplitudes()) == 0.0);
    }
  }
}

TEST_CASE("shift operator is the compressed shift") {
  const auto s = LatticeOperator::shift_operator(6, 2);
  const auto v = LatticeVector::basis(6, 1);
  CHECK(s.apply(v)[-1] == Complex(1.0, 0.0));
  CHECK(s(-1, 1) == Complex(1.0, 0.0));
}

TEST_CASE("conjugate_by_shift matches explicit S_t A S_-t away from the edge") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const int n = 6;
  Matrix a(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(g(rng), g(rng));
  for (int t = -3; t <= 3; ++t) {
    const Matrix s = LatticeOperator::shift_operator(n, t).matrix();
    const Matrix sinv = LatticeOperator::shift_operator(n, -t).matrix();
    const Matrix direct = s * a * sinv;
    CHECK(max_abs(direct - conjugate_by_shift(a, n, t)) < 1e-14);
  }
}

TEST_CASE("operator tags are validated") {
  Matrix m = Matrix::Identity(4, 4);
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(LatticeOperator(m, -2, OperatorTag::unitary), std::invalid_argument);
  Matrix upper = Matrix::Identity(3, 3);
  upper(0, 2) = 1.0;
  CHECK_THROWS_AS(LatticeOperator(upper, 0, OperatorTag::lower_triangular_toeplitz), std::invalid_argument);
  CHECK_NOTHROW(LatticeOperator::identity(5));
}

TEST_CASE("head and tail projections split H_0") {
  const int n = 8;
  const Matrix sum = head_projection(n, 3).matrix() + tail_projection(n, 3).matrix();
  Matrix h0 = Matrix::Zero(2 * n, 2 * n);
  h0.bottomRightCorner(n, n).setIdentity();
  CHECK(max_abs(sum - h0) == 0.0);
}
