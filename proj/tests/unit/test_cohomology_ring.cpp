#include <doctest.h>

#include <cmath>
#include <random>

#include "qcohom/cohomology_ring.hpp"

using namespace qcohom;

namespace {

auto shifted_module() {
  return std::make_shared<const ScalarFieldModule>(std::vector<double>{-2.5, -1.0, 0.0, 0.25, 1.75, 3.0});
}

auto trivial_module() { return std::make_shared<const ScalarFieldModule>(std::vector<double>{0.0, 1.5}, true); }

Measure mixed_measure() {
  Measure nu;
  nu.atoms = {{0.0, 1.0}, {2.5, 0.75}, {-3.25, 2.0}};
  nu.grid_origin = -4.0;
  nu.grid_step = 0.5;
  nu.cell_densities = {0.5, 1.0, 0.0, 2.0, 0.25, 1.5, 0.0, 3.0, 1.0, 0.5, 0.75, 2.0, 0.125, 0.0, 1.0, 0.5};
  nu.lebesgue = 0.3;
  nu.counting = 0.5;
  return nu;
}

}  // namespace

TEST_CASE("coboundary of a constant 1-cochain under the trivial action") {
  const auto x = constant_cochain(trivial_module(), 1, 2.5);
  const auto dx = coboundary(x);
  // c - c + c
  CHECK((*dx.module()).norm(dx({3, -4}) - ScalarField::constant(2.5)) == 0.0);
  const auto ddx = coboundary(dx);
  CHECK(ddx.degree() == 3);
  CHECK(ddx.module()->norm(ddx({1, 2, 3})) == 0.0);
}

TEST_CASE("counting measure cocycle") {
  const auto module = shifted_module();
  const auto i0 = measure_cocycle(module, Measure::counting_measure(), 0.0);
  for (int n = -7; n <= 7; ++n) CHECK(i0({n})(0.0) == doctest::Approx(n));
  const auto cup2 = cup(i0, i0);
  for (int t1 = -5; t1 <= 5; ++t1) {
    for (int t2 = -5; t2 <= 5; ++t2) CHECK(cup2({t1, t2})(0.0) == doctest::Approx(t1 * t2));
  }
}

TEST_CASE("single atom at 0") {
  Measure nu;
  nu.atoms = {{0.0, 1.0}};
  for (double r : {-3.0, -1.0, -0.5, 0.0, 0.5, 2.0}) {
    for (int n = 0; n <= 5; ++n) {
      const double expected = (0.0 >= r && 0.0 < r + n) ? 1.0 : 0.0;
      CHECK(nu.integral(r, n) == expected);
    }
  }
}

TEST_CASE("measure integral is an additive cocycle in t") {
  const auto nu = mixed_measure();
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const double r = u(rng);
    const double m = std::round(u(rng));
    const double n = std::round(u(rng));
    CHECK(std::abs(nu.integral(r, m + n) - nu.integral(r, m) - nu.integral(r + m, n)) < 1e-12);
  }
}

TEST_CASE("measure cocycles are closed") {
  const auto module = shifted_module();
  std::mt19937_64 rng(42);
  const auto tuples = random_tuples(rng, 100, 2, 6);
  for (double r : {0.0, -1.5, 0.75}) {
    CHECK(cocycle_residual(measure_cocycle(module, mixed_measure(), r), tuples) < 1e-10);
  }
}

TEST_CASE("d of d vanishes on unstructured cochains") {
  const auto module = shifted_module();
  std::mt19937_64 rng(7);
  for (int degree : {1, 2}) {
    const auto y = random_scalar_cochain(module, degree, 1234 + degree);
    const auto tuples = random_tuples(rng, 200, degree + 2, 5);
    CHECK(max_norm(coboundary(coboundary(y)), tuples) < 1e-10);
    // not a cocycle itself
    CHECK(cocycle_residual(y, random_tuples(rng, 20, degree + 1, 5)) > 1e-3);
  }
  const auto lattice = std::make_shared<const LatticeOperatorModule>(32);
  for (int degree : {1, 2}) {
    const auto y = random_lattice_cochain(lattice, degree, 99 + degree, 4, 3);
    const auto tuples = random_tuples(rng, 200, degree + 2, 1);
    CHECK(max_norm(coboundary(coboundary(y)), tuples) < 1e-10);
  }
}

TEST_CASE("cup of cocycles is a cocycle and cup is associative") {
  const auto module = shifted_module();
  const auto nu = mixed_measure();
  const auto x = measure_cocycle(module, nu, 0.0);
  const auto y = measure_cocycle(module, nu, 1.25);
  const auto z = measure_cocycle(module, Measure::counting_measure(), -0.5);
  std::mt19937_64 rng(3);
  CHECK(cocycle_residual(cup(x, y), random_tuples(rng, 100, 3, 4)) < 1e-10);
  CHECK(cocycle_residual(tensor_cocycle(module, nu, {0.0, 0.5, -1.0}), random_tuples(rng, 60, 4, 3)) < 1e-10);

  const auto tuples = random_tuples(rng, 100, 3, 4);
  CHECK(distance(cup(cup(x, y), z), cup(x, cup(y, z)), tuples) < 1e-10);
}

TEST_CASE("cup over the trivial action is the pointwise product") {
  const auto module = trivial_module();
  const auto x = random_scalar_cochain(module, 1, 5);
  const auto y = random_scalar_cochain(module, 2, 6);
  const auto xy = cup(x, y);
  for (int a = -2; a <= 2; ++a) {
    for (double r : module->sample_points()) CHECK(xy({a, 1, -1})(r) == x({a})(r) * y({1, -1})(r));
  }
}

TEST_CASE("leibniz rule for cup") {
  const auto module = shifted_module();
  const auto x = random_scalar_cochain(module, 1, 11);
  const auto y = random_scalar_cochain(module, 1, 12);
  std::mt19937_64 rng(8);
  const auto tuples = random_tuples(rng, 50, 3, 3);
  const auto lhs = coboundary(cup(x, y));
  // d(x u y) = dx u y - x u dy for deg x = 1
  double worst = 0.0;
  const auto a = cup(coboundary(x), y);
  const auto b = cup(x, coboundary(y));
  for (const auto& t : tuples) worst = std::max(worst, module->norm(lhs(t) - (a(t) - b(t))));
  CHECK(worst < 1e-10);
}

TEST_CASE("extend_process folds cup products") {
  const auto module = shifted_module();
  const auto nu = mixed_measure();
  std::map<std::string, ScalarCochain> gens{{"x", measure_cocycle(module, nu, 0.0)},
                                            {"y", measure_cocycle(module, nu, 0.5)},
                                            {"z", random_scalar_cochain(module, 1, 77)}};
  const auto single = extend_process(gens, {"x"});
  CHECK(module->norm(single({3}) - gens.at("x")({3})) == 0.0);
  const auto word = extend_process(gens, {"x", "y", "z"});
  const auto right = cup(gens.at("x"), cup(gens.at("y"), gens.at("z")));
  std::mt19937_64 rng(1);
  CHECK(distance(word, right, random_tuples(rng, 50, 3, 4)) < 1e-10);
  CHECK_THROWS_AS(extend_process(gens, {}), std::invalid_argument);
  CHECK_THROWS_AS(extend_process(gens, {"q"}), std::invalid_argument);
}

TEST_CASE("module actions are additive") {
  const auto module = shifted_module();
  const auto f = ScalarField([](double r) { return std::sin(r) + r * r; });
  CHECK(action_additivity_residual(*module, f, {{1, 2}, {-3, 5}, {4, -4}}) < 1e-10);
  const LatticeOperatorModule lattice(16);
  Matrix x = Matrix::Zero(32, 32);
  x.block(14, 14, 4, 4).setConstant(Complex(0.5, -1.0));
  CHECK(action_additivity_residual(lattice, x, {{1, 2}, {-3, 5}, {4, -4}}) == 0.0);
}

TEST_CASE("domain errors") {
  const auto module = shifted_module();
  const auto x = measure_cocycle(module, Measure::counting_measure(), 0.0, 10);
  CHECK_THROWS_AS(x({11}), CochainDomainError);
  CHECK_THROWS_AS(x({1, 2}), std::invalid_argument);
  Measure bounded = Measure::counting_measure();
  bounded.domain_lo = -5;
  bounded.domain_hi = 5;
  CHECK_THROWS_AS(bounded.integral(0.0, 7.0), CochainDomainError);
}
