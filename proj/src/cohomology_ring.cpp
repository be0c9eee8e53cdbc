#include "qcohom/cohomology_ring.hpp"

#include <cmath>

namespace qcohom {

std::vector<std::vector<int>> random_tuples(std::mt19937_64& rng, int count, int arity, int bound) {
  std::uniform_int_distribution<int> pick(-bound, bound);
  std::vector<std::vector<int>> out(static_cast<size_t>(count));
  for (auto& t : out) {
    t.resize(static_cast<size_t>(arity));
    for (auto& s : t) s = pick(rng);
  }
  return out;
}

std::uint64_t hash_tuple(std::uint64_t seed, std::span<const int> t) {
  // splitmix64 over the arguments
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (int s : t) h = mix(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(s)));
  return mix(h ^ t.size());
}

ScalarField ScalarField::operator+(const ScalarField& o) const {
  auto a = fn_;
  auto b = o.fn_;
  return ScalarField([a, b](double r) { return (*a)(r) + (*b)(r); });
}

ScalarField ScalarField::operator-(const ScalarField& o) const {
  auto a = fn_;
  auto b = o.fn_;
  return ScalarField([a, b](double r) { return (*a)(r) - (*b)(r); });
}

ScalarField ScalarField::operator*(const ScalarField& o) const {
  auto a = fn_;
  auto b = o.fn_;
  return ScalarField([a, b](double r) { return (*a)(r) * (*b)(r); });
}

ScalarField ScalarField::operator*(double c) const {
  auto a = fn_;
  return ScalarField([a, c](double r) { return c * (*a)(r); });
}

ScalarFieldModule::ScalarFieldModule(std::vector<double> sample_points, bool trivial_action)
    : samples_(std::move(sample_points)), trivial_(trivial_action) {
  if (samples_.empty()) throw std::invalid_argument("scalar module needs at least one sample point");
}

ScalarField ScalarFieldModule::act(int t, const ScalarField& f) const {
  if (trivial_ || t == 0) return f;
  return ScalarField([f, t](double r) { return f(r + t); });
}

double ScalarFieldModule::norm(const ScalarField& f) const {
  double worst = 0.0;
  for (double r : samples_) worst = std::max(worst, std::abs(f(r)));
  return worst;
}

double Measure::interval(double a, double b) const {
  if (b < a) throw std::invalid_argument("interval endpoints out of order");
  if (a < domain_lo || b > domain_hi) {
    throw CochainDomainError("interval [" + std::to_string(a) + ", " + std::to_string(b) +
                             ") leaves the measure domain");
  }
  double mass = 0.0;
  for (const auto& atom : atoms) {
    if (atom.position >= a && atom.position < b) mass += atom.mass;
  }
  for (size_t i = 0; i < cell_densities.size(); ++i) {
    const double lo = grid_origin + grid_step * static_cast<double>(i);
    const double hi = lo + grid_step;
    const double overlap = std::min(hi, b) - std::max(lo, a);
    if (overlap > 0.0) mass += cell_densities[i] * overlap;
  }
  mass += lebesgue * (b - a);
  // integers in [a, b)
  if (counting != 0.0) mass += counting * (std::ceil(b) - std::ceil(a));
  return mass;
}

double Measure::integral(double r, double t) const {
  if (t >= 0.0) return interval(r, r + t);
  return -interval(r + t, r);
}

ScalarCochain measure_cocycle(std::shared_ptr<const ScalarFieldModule> module, const Measure& nu, double r,
                              int domain_bound) {
  auto rule = [nu, r](std::span<const int> t) {
    const double step = t[0];
    return ScalarField([nu, r, step](double rho) { return nu.integral(rho + r, step); });
  };
  return ScalarCochain(std::move(module), 1, std::move(rule), domain_bound, "I_" + std::to_string(r));
}

ScalarCochain tensor_cocycle(std::shared_ptr<const ScalarFieldModule> module, const Measure& nu,
                             const std::vector<double>& base_points, int domain_bound) {
  if (base_points.empty()) throw std::invalid_argument("tensor_cocycle needs at least one base point");
  ScalarCochain out = measure_cocycle(module, nu, base_points.front(), domain_bound);
  for (size_t i = 1; i < base_points.size(); ++i) out = cup(out, measure_cocycle(module, nu, base_points[i], domain_bound));
  return out;
}

ScalarCochain random_scalar_cochain(std::shared_ptr<const ScalarFieldModule> module, int degree,
                                    std::uint64_t seed, int domain_bound) {
  auto rule = [seed](std::span<const int> t) {
    std::mt19937_64 rng(hash_tuple(seed, t));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a0 = u(rng);
    const double a1 = u(rng);
    const double f1 = 2.0 * u(rng);
    const double p1 = 3.0 * u(rng);
    return ScalarField([=](double r) { return a0 + a1 * std::sin(f1 * r + p1); });
  };
  return ScalarCochain(std::move(module), degree, std::move(rule), domain_bound, "random");
}

Cochain<LatticeOperatorModule> random_lattice_cochain(std::shared_ptr<const LatticeOperatorModule> module,
                                                      int degree, std::uint64_t seed, int block,
                                                      int domain_bound) {
  const int n = module->half_width();
  if (block <= 0 || 2 * domain_bound * (degree + 1) + block > 2 * n) {
    throw WindowOverflowError("random lattice cochain does not fit the window");
  }
  auto rule = [seed, block, n](std::span<const int> t) {
    std::mt19937_64 rng(hash_tuple(seed, t));
    std::normal_distribution<double> g;
    Matrix x = Matrix::Zero(2 * n, 2 * n);
    const int first = n - block / 2;
    for (int c = 0; c < block; ++c) {
      for (int r = 0; r < block; ++r) x(first + r, first + c) = Complex(g(rng), g(rng)) / static_cast<double>(block);
    }
    return x;
  };
  return Cochain<LatticeOperatorModule>(std::move(module), degree, std::move(rule), domain_bound, "random");
}

ScalarCochain constant_cochain(std::shared_ptr<const ScalarFieldModule> module, int degree, double c) {
  auto rule = [c](std::span<const int>) { return ScalarField::constant(c); };
  return ScalarCochain(std::move(module), degree, std::move(rule), 1 << 20, "const");
}

}  // namespace qcohom
