#include <doctest.h>

#include <cmath>
#include <random>

#include "qcohom/cocycle_lab.hpp"

using namespace qcohom;

namespace {

MultiplicativeCocycle from_inner(const InnerFunction& theta, std::vector<Complex> spectrum, int n,
                                 int horizon = 6, ConstructorForm form = ConstructorForm::corrected) {
  return markovian_from_inner(ModelSpaceUnitary(model_space(theta, n), std::move(spectrum)), horizon, form);
}

InnerFunction half_blaschke() { return InnerFunction(1.0, {Complex(0.5, 0.0)}); }
InnerFunction degree_two() { return InnerFunction(1.0, {Complex(0.3, 0.0), Complex(0.0, -0.4)}); }

}  // namespace

TEST_CASE("trivial cocycle") {
  const auto w = trivial_cocycle(32);
  const auto r = verify_cocycle(w, 6);
  CHECK(r.cocycle_residual == 0.0);
  CHECK(r.identity_at_zero == 0.0);
  CHECK(verify_markovian(w, 6).residual() == 0.0);
}

TEST_CASE("W_{-1} for Theta = z is a permutation with one phase") {
  const int n = 16;
  const Complex lambda = std::polar(1.0, 0.9);
  const auto w = from_inner(InnerFunction::identity(), {lambda}, n);
  Matrix oracle = Matrix::Identity(2 * n, 2 * n);
  oracle(n, n) = 0.0;
  oracle(n + 1, n + 1) = 0.0;
  oracle(n + 1, n) = 1.0;     // e_0 -> e_1
  oracle(n, n + 1) = lambda;  // e_1 -> lambda e_0
  CHECK(max_abs(w.at(-1) - oracle) < 1e-14);
}

TEST_CASE("literal form breaks unitarity at Theta = z") {
  const auto w = from_inner(InnerFunction::identity(), {1.0}, 16, 2, ConstructorForm::literal);
  const Vector col = w.at(-1).col(16 + 1);
  CHECK(col.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("phase-only Theta gives W = phase on H_0 heads") {
  const Complex mu = std::polar(1.0, 0.3);
  const auto w = from_inner(InnerFunction::constant(mu), {}, 16);
  const Matrix w1 = w.at(-1);
  CHECK(std::abs(w1(16, 16) - mu) < 1e-14);
  CHECK(std::abs(w1(17, 17) - 1.0) < 1e-14);
}

TEST_CASE("coboundary cocycles") {
  std::mt19937_64 rng(42);
  const int n = 32;
  const auto j = random_local_unitary(n, 8, rng);
  const auto w = coboundary_cocycle(j, 6);
  const auto r = verify_cocycle(w, 6);
  CHECK(r.cocycle_residual < 1e-10);
  CHECK(r.unitarity_residual < 1e-10);
  CHECK(r.adjoint_residual < 1e-10);
  CHECK(coboundary_triviality(w, j, 6) < 1e-10);
  CHECK(verify_markovian(w, 6).residual() > 1e-2);
  CHECK_THROWS_AS(w.certify_markovian(), NonMarkovianError);
}

TEST_CASE("constructed cocycles satisfy the cocycle algebra") {
  for (int n : {64, 128}) {
    for (const auto& theta : {InnerFunction::identity(), half_blaschke(), degree_two()}) {
      std::vector<Complex> spectrum;
      for (int i = 0; i < theta.blaschke_degree(); ++i) spectrum.push_back(std::polar(1.0, 0.5 + i));
      const auto w = from_inner(theta, spectrum, n);
      const auto r = verify_cocycle(w, 6);
      INFO("N = ", n, " degree ", theta.blaschke_degree());
      CHECK(r.cocycle_residual < 1e-10);
      CHECK(r.unitarity_residual < 1e-10);
      CHECK(r.adjoint_residual < 1e-10);
      CHECK(verify_markovian(w, 6).residual() < 1e-10);
    }
  }
}

TEST_CASE("associated isometry of Theta = z") {
  const int n = 16;
  const Complex lambda = std::polar(1.0, -1.2);
  const auto w = from_inner(InnerFunction::identity(), {lambda}, n).certify_markovian();
  const auto v = associated_isometry(w);
  CHECK(std::abs(v.generator()(0, 0) - lambda) < 1e-14);
  for (int k = 1; k + 1 < n; ++k) CHECK(std::abs(v.generator()(k + 1, k) - 1.0) < 1e-14);
  CHECK(v.interior_isometry_defect < 1e-10);
  CHECK(v.semigroup_residual < 1e-12);
  CHECK(v.leakage == 0.0);
}

TEST_CASE("associated isometry needs a certified cocycle") {
  CHECK_THROWS_AS(associated_isometry(trivial_cocycle(8)), NonMarkovianError);
  const auto v = associated_isometry(trivial_cocycle(8).certify_markovian());
  for (int k = 0; k + 1 < 8; ++k) CHECK(v.generator()(k + 1, k) == Complex(1.0, 0.0));
}

TEST_CASE("wold decomposition of constructed cocycles") {
  const int n = 64;
  const std::vector<Complex> spectrum{std::polar(1.0, 0.4), std::polar(1.0, 2.0)};
  const auto w = from_inner(degree_two(), spectrum, n).certify_markovian();
  const auto wold = wold_decompose(associated_isometry(w));
  CHECK(wold.defect_index == 1);
  CHECK(wold.unitary_basis.cols() == 2);
  CHECK(wold.mutual_orthogonality < 1e-9);
  CHECK(wold.unitary_invariance < 1e-9);
  CHECK(wold.shift_invariance < 1e-9);
  CHECK(wold.shift_forward < 1e-9);
  for (const auto& want : spectrum) {
    double best = 1.0;
    for (Eigen::Index i = 0; i < wold.unitary_eigenvalues.size(); ++i) {
      best = std::min(best, std::abs(wold.unitary_eigenvalues[i] - want));
    }
    CHECK(best < 1e-9);
  }
}

TEST_CASE("wold decomposition of the right shift") {
  const auto wold = wold_decompose(associated_isometry(trivial_cocycle(32).certify_markovian()));
  CHECK(wold.defect_index == 1);
  CHECK(wold.unitary_basis.cols() == 0);
  CHECK(wold.rank_defect_index == 1);
}

TEST_CASE("limit cocycle equals M_Theta") {
  const int n = 64;
  const auto theta = half_blaschke();
  const auto w = from_inner(theta, {std::polar(1.0, 1.0)}, n).certify_markovian();
  const auto limit = limit_cocycle(w);
  const Matrix m = toeplitz_multiplier(theta, n).op.matrix();
  CHECK(limit.stabilization_residual < 1e-10);
  CHECK(max_abs(limit.limit.matrix() - m) < 1e-10);
  CHECK(limit.range_residual < 1e-9);
  const auto space = model_space(theta, n);
  CHECK(max_abs(space.basis.adjoint() * limit.limit.matrix().leftCols(n / 2)) < 1e-9);
}

TEST_CASE("limit of the trivial cocycle is the identity") {
  const auto limit = limit_cocycle(trivial_cocycle(16).certify_markovian());
  CHECK(max_abs(limit.limit.matrix() - Matrix::Identity(16, 16)) == 0.0);
}

TEST_CASE("zeta and xi for W = I") {
  const int n = 128;
  const auto report = zeta_xi(trivial_cocycle(n).certify_markovian(), 40);
  CHECK(report.zeta[1][0] == Complex(-1.0, 0.0));
  CHECK(std::abs(report.xi[3] + std::exp(-3.0)) < 1e-15);
  CHECK(report.additive_residual == 0.0);
  CHECK(report.orthogonality_residual == 0.0);
  CHECK(report.eigen_residual < 1e-8);
}

TEST_CASE("zeta and xi for a Blaschke cocycle") {
  const auto w = from_inner(half_blaschke(), {std::polar(1.0, 0.2)}, 128).certify_markovian();
  const auto report = zeta_xi(w, 40);
  CHECK(report.additive_residual < 1e-10);
  CHECK(report.orthogonality_residual < 1e-10);
  CHECK(report.eigen_residual < 1e-8);
}

TEST_CASE("Hilbert-Schmidt series") {
  const auto identity_series = hs_distance(trivial_cocycle(16), -1, {2, 4, 8});
  for (double v : identity_series.values) CHECK(v == 0.0);

  const auto w = from_inner(InnerFunction::identity(), {1.0}, 16);
  const Matrix diff = w.at(-1) - Matrix::Identity(32, 32);
  int nonzero = 0;
  for (Eigen::Index i = 0; i < diff.size(); ++i) nonzero += std::abs(diff.data()[i]) > 1e-14 ? 1 : 0;
  CHECK(nonzero == 4);
  const auto series = hs_distance(w, -1, {2, 4, 8, 16, 32});
  CHECK(series.values.back() == doctest::Approx(2.0));
  CHECK(series.values[1] == doctest::Approx(series.values.back()));
  CHECK(series.passed);
}
