#include <doctest.h>

#include "qcohom/car_flow.hpp"

using namespace qcohom;

namespace {

Matrix dense(const FermionOperator& x) { return Matrix(x.matrix()); }

}  // namespace

TEST_CASE("one site lowering matrix") {
  const FermionWindow w(1, 1);
  Matrix lowering = Matrix::Zero(2, 2);
  lowering(0, 1) = 1.0;
  CHECK(max_abs(dense(w.annihilation(1)) - lowering) == 0.0);
}

TEST_CASE("two sites anticommute") {
  const FermionWindow w(1, 2);
  const Matrix a1 = dense(w.annihilation(1));
  const Matrix a2 = dense(w.annihilation(2));
  CHECK(max_abs(a1 * a2 + a2 * a1) == 0.0);
  const Matrix n1 = dense(w.number(1));
  CHECK(max_abs(n1 * n1 - n1) == 0.0);
}

TEST_CASE("car relations up to the cap") {
  for (int sites = 1; sites <= kMaxFermionSites; sites += 3) {
    const FermionWindow w(-sites / 2, -sites / 2 + sites - 1);
    CHECK(w.car_residual() <= 1e-12);
  }
  CHECK_THROWS_AS(FermionWindow(0, kMaxFermionSites), std::invalid_argument);
}

TEST_CASE("canonical basis states carry a plus sign") {
  const FermionWindow w(0, 3);
  // a*_0 a*_2 |0> = |bits 0 and 2>
  Vector vacuum = Vector::Zero(16);
  vacuum[0] = 1.0;
  const Vector state = dense(w.creation(0)) * (dense(w.creation(2)) * vacuum);
  CHECK(state[5] == Complex(1.0, 0.0));
}

TEST_CASE("shift automorphism") {
  const FermionWindow w(-2, 3);
  CHECK((w.shift(w.annihilation(1), 1) - w.annihilation(2)).max_entry() == 0.0);
  for (int k = -2; k <= 3; ++k) {
    for (int m = -2 - k; m <= 3 - k; ++m) {
      CHECK((w.shift(w.creation(k), m) - w.creation(k + m)).max_entry() == 0.0);
    }
  }
  const auto x = w.creation(0) * w.annihilation(1) + w.number(-1);
  CHECK((w.shift(w.shift(x, 1), 1) - w.shift(x, 2)).max_entry() < 1e-15);
  CHECK(w.measured_parity(w.shift(x, 1)) == Parity::even);
  CHECK_THROWS_AS(w.shift(w.annihilation(3), 1), WindowOverflowError);
  // CAR after shifting
  const auto b1 = w.shift(w.annihilation(-2), 2);
  const auto b2 = w.shift(w.annihilation(-1), 2);
  CHECK((anticommutator(b1, b2.adjoint())).max_entry() == 0.0);
  CHECK((anticommutator(b1, b1.adjoint()) - w.identity()).max_entry() == 0.0);
}

TEST_CASE("basic processes") {
  const auto w = std::make_shared<const FermionWindow>(-3, 4);
  const CarProcess j(w);
  const auto a2 = j(ProcessSymbol::a, 2);
  const auto a3 = j(ProcessSymbol::a, 3);
  CHECK((a2 * a3.adjoint() + a3.adjoint() * a2 - w->identity() * 2.0).max_entry() == 0.0);
  CHECK((j(ProcessSymbol::a, -2) + w->annihilation(-1) + w->annihilation(0)).max_entry() == 0.0);
  CHECK((j(ProcessSymbol::unit, 3) - w->identity() * 3.0).max_entry() == 0.0);
  CHECK_THROWS_AS(j(ProcessSymbol::a, 5), WindowOverflowError);
}

TEST_CASE("relation suite") {
  const CarProcess j(std::make_shared<const FermionWindow>(-5, 6));
  const auto r = verify_relations(j);
  CHECK(r.car <= 1e-12);
  CHECK(r.adjoint == 0.0);
  CHECK(r.min_anticommutator <= 1e-12);
  CHECK(r.anticommutator <= 1e-12);
  CHECK(r.unit_identity <= 1e-12);
  CHECK(r.number_commutator <= 1e-12);
  CHECK(r.number_commutator_star <= 1e-12);
  CHECK(r.additivity <= 1e-12);
  CHECK(r.parity_ok);
  REQUIRE(r.witness.size() == 6);
  // Lambda_n - A_n* A_n is minus the second quantization of J - I
  for (size_t i = 0; i < r.witness.size(); ++i) CHECK(r.witness[i] == doctest::Approx(static_cast<double>(i)));
  CHECK(r.witness[1] > 0.5);
}

TEST_CASE("odot dictionary") {
  const FermionWindow w(0, 3);
  CHECK((odot(w, {"a", "a*"}, {1, 2}) - w.annihilation(1) * w.creation(2)).max_entry() == 0.0);
  const auto aa = odot(w, {"a", "a"}, {1, 2});
  CHECK((aa * aa).max_entry() == 0.0);
  CHECK((odot(w, {"a*"}, {3}) - w.creation(3)).max_entry() == 0.0);
  CHECK((odot(w, {"aa*"}, {0}) - (w.identity() - w.number(0))).max_entry() == 0.0);
  CHECK_THROWS_AS(odot(w, {"b"}, {1}), std::invalid_argument);
}

TEST_CASE("operator cochains of the process") {
  const auto w = std::make_shared<const FermionWindow>(-4, 5);
  const CarProcess j(w);
  const auto module = std::make_shared<const FermionModule>(w);
  const auto a = process_cochain(module, j, ProcessSymbol::a);
  const auto a_star = process_cochain(module, j, ProcessSymbol::a_star);
  CHECK(module->norm(coboundary(a)({2, 1})) == 0.0);
  CHECK(module->norm(coboundary(a)({-2, 3})) == 0.0);
  const auto word = extend_process(std::map<std::string, Cochain<FermionModule>>{{"a", a}, {"a*", a_star}},
                                   {"a", "a*"});
  for (auto [t1, t2] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{-1, 2}}) {
    const auto oracle = j(ProcessSymbol::a, t1) * w->shift(j(ProcessSymbol::a_star, t2), t1);
    CHECK((word({t1, t2}) - oracle).max_entry() == 0.0);
  }
}
