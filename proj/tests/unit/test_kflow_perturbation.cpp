#include <doctest.h>

#include <numbers>

#include "qcohom/kflow_perturbation.hpp"

using namespace qcohom;

namespace {

std::shared_ptr<const FermionWindow> window() { return std::make_shared<const FermionWindow>(-7, 3); }

std::shared_ptr<const AlgebraCocycle> phase_cocycle(const std::shared_ptr<const FermionWindow>& w, double theta) {
  return std::make_shared<const AlgebraCocycle>(w, phase_unitary(*w, 0, theta), 8);
}

}  // namespace

TEST_CASE("membership tests") {
  const FermionWindow w(-3, 3);
  CHECK(past_membership_residual(w, w.annihilation(-1), 0) == 0.0);
  CHECK(past_membership_residual(w, w.annihilation(1), 0) > 0.5);
  CHECK(past_membership_residual(w, w.number(-2) + w.creation(0), 0) == 0.0);
  CHECK(future_membership_residual(w, w.annihilation(2) * w.creation(1), 0) == 0.0);
  // nested
  CHECK(past_membership_residual(w, w.creation(-2), -1) == 0.0);
}

TEST_CASE("trivial cocycle") {
  const auto w = window();
  const AlgebraCocycle one(w, w->identity(), 4);
  CHECK(one.cocycle_residual() == 0.0);
  CHECK(one.markovian_residual() == 0.0);
  for (int t = -4; t <= 4; ++t) CHECK((one.at(t) - w->identity()).max_entry() == 0.0);
}

TEST_CASE("phase cocycle is markovian") {
  const auto w = window();
  const auto c = phase_cocycle(w, std::numbers::pi / 2);
  CHECK(c->cocycle_residual() < 1e-12);
  CHECK(c->unitarity_residual() < 1e-12);
  CHECK(c->markovian_residual() == 0.0);
  CHECK(c->past_invariance_residual() == 0.0);
  CHECK(c->checked_pairs() > 20);
  CHECK(c->past_depth() == 7);
}

TEST_CASE("cocycle generators are validated") {
  const auto w = window();
  const auto odd = w->annihilation(0) + w->creation(0);
  CHECK_THROWS_AS(AlgebraCocycle(w, odd, 2), std::invalid_argument);
  CHECK_THROWS_AS(AlgebraCocycle(w, phase_unitary(*w, 1, 0.3), 2), LocalizationError);
  CHECK_THROWS_AS(AlgebraCocycle(w, w->number(0), 2), std::invalid_argument);
  const AlgebraCocycle control(w, odd, 2, {1e-12, true});
  CHECK(control.markovian_residual() > 1.0);
}

TEST_CASE("perturbed process") {
  const auto w = window();
  const PerturbedProcess p(CarProcess(w), phase_cocycle(w, std::numbers::pi / 2));
  const auto r = verify_perturbed_additivity(p);
  CHECK(r.negative_residual < 1e-11);
  CHECK(r.residual < 1e-11);
  CHECK(r.future_unchanged == 0.0);
  CHECK(r.pairs > 50);

  const PerturbedProcess trivial(CarProcess(w), std::make_shared<const AlgebraCocycle>(w, w->identity(), 4));
  CHECK((trivial(ProcessSymbol::a, -3) - CarProcess(w)(ProcessSymbol::a, -3)).max_entry() == 0.0);
  CHECK((trivial.alpha(w->creation(1), 2) - w->shift(w->creation(1), 2)).max_entry() == 0.0);
}

TEST_CASE("localization identities") {
  const auto w = window();
  const PerturbedProcess p(CarProcess(w), phase_cocycle(w, 0.7));
  const auto x = w->annihilation(1) * w->creation(1);
  CHECK((p.alpha(x, 1) - w->shift(x, 1)).max_entry() == 0.0);
  const auto r = verify_localization(p);
  // a unimodular phase is not exactly unimodular in floating point
  CHECK(r.future_residual < 1e-14);
  CHECK(r.past_residual < 1e-14);
  CHECK(r.depth == 0);

  const auto odd = w->annihilation(0) + w->creation(0);
  const PerturbedProcess control(CarProcess(w), std::make_shared<const AlgebraCocycle>(w, odd, 4,
                                                                                       AlgebraCocycle::Options{1e-12, true}));
  CHECK(verify_localization(control).future_residual > 1.0);
}

TEST_CASE("trace factorizes across a cut") {
  std::mt19937_64 rng(42);
  const FermionWindow w(-4, 5);
  const auto r = independence_check(w, rng, 30);
  CHECK(r.residual <= 1e-12);
  CHECK(r.negative_control == doctest::Approx(0.25));
  CHECK(w.state(w.identity()) == Complex(1.0, 0.0));
}

TEST_CASE("powers shift proxy") {
  const auto r = powers_shift_check(6);
  CHECK(r.shift_residual == 0.0);
  CHECK(r.chain_decreasing);
  CHECK(r.algebra_dims == std::vector<int>{4096, 1024, 256, 64, 16, 4, 1});
  CHECK(r.intersection_dim == 1);
}

TEST_CASE("perturbed filtration stays inside") {
  const auto w = window();
  CHECK(perturbed_filtration_residual(*phase_cocycle(w, 1.1)) == 0.0);
}

TEST_CASE("conjugacy") {
  const auto w = window();
  const Conjugacy theta(phase_cocycle(w, std::numbers::pi / 2));
  const auto x = w->annihilation(-1);
  CHECK((theta.theta_plus(theta.theta(x)) - x).max_entry() == 0.0);
  const auto n2 = w->number(-2);
  CHECK((theta.beta_tilde(theta.theta(n2), 1) - theta.theta(w->shift(n2, -1))).max_entry() < 1e-11);
  const auto r = theta.verify(interior_elements(*w), 2);
  CHECK(r.checked == 4);
  CHECK(r.skipped.empty());
  CHECK(r.left_inverse < 1e-11);
  CHECK(r.right_inverse < 1e-11);
  CHECK(r.intertwining < 1e-11);
  CHECK(r.stabilization < 1e-11);

  const Conjugacy identity(std::make_shared<const AlgebraCocycle>(w, w->identity(), 4));
  CHECK((identity.theta(x) - x).max_entry() == 0.0);
}
