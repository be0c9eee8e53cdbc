#pragma once

// Cochains Hom(Z^k, M) over a shift module M, the coboundary d, the cup
// product and the cocycles generated by a measure on the line.
//
// A module type provides
//   using Value = ...;               // closed under +, -, * and scalar *
//   Value act(int t, const Value&) const;
//   double norm(const Value&) const; // residual norm
// Values are combined with their own operators, so the same templates serve
// scalar fields, lattice operators and fermion operators.

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcohom/core_lattice.hpp"

namespace qcohom {

class CochainDomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

template <class Module>
class Cochain {
 public:
  using Value = typename Module::Value;
  using Rule = std::function<Value(std::span<const int>)>;

  Cochain(std::shared_ptr<const Module> module, int degree, Rule rule, int domain_bound, std::string label = {})
      : module_(std::move(module)), degree_(degree), rule_(std::move(rule)), bound_(domain_bound),
        label_(std::move(label)) {
    if (degree_ < 1) throw std::invalid_argument("cochains start at degree 1");
    if (!module_) throw std::invalid_argument("cochain without a module");
  }

  int degree() const { return degree_; }
  int domain_bound() const { return bound_; }
  const std::string& label() const { return label_; }
  const std::shared_ptr<const Module>& module() const { return module_; }

  Value operator()(std::span<const int> t) const {
    if (static_cast<int>(t.size()) != degree_) {
      throw std::invalid_argument("cochain of degree " + std::to_string(degree_) + " called with " +
                                  std::to_string(t.size()) + " arguments");
    }
    for (int s : t) {
      if (std::abs(s) > bound_) {
        throw CochainDomainError("argument " + std::to_string(s) + " exceeds the domain bound " +
                                 std::to_string(bound_) + " of " + label_);
      }
    }
    return rule_(t);
  }
  Value operator()(std::initializer_list<int> t) const {
    return (*this)(std::span<const int>(t.begin(), t.size()));
  }

 private:
  std::shared_ptr<const Module> module_;
  int degree_;
  Rule rule_;
  int bound_;
  std::string label_;
};

/// (dx)(t_1..t_{k+1}) = a_{t_1}(x(t_2..t_{k+1})) + sum_{i=1}^{k} (-1)^i x(.., t_i + t_{i+1}, ..)
///                      + (-1)^{k+1} x(t_1..t_k)
template <class Module>
Cochain<Module> coboundary(const Cochain<Module>& x) {
  const int k = x.degree();
  auto rule = [x, k](std::span<const int> t) {
    const auto& module = *x.module();
    std::vector<int> args(t.begin() + 1, t.end());
    auto out = module.act(t[0], x(args));
    for (int i = 1; i <= k; ++i) {
      // t_i and t_{i+1} (1-based) merge
      std::vector<int> merged(t.begin(), t.end());
      merged[static_cast<size_t>(i - 1)] += merged[static_cast<size_t>(i)];
      merged.erase(merged.begin() + i);
      if (i % 2 == 0) {
        out = out + x(merged);
      } else {
        out = out - x(merged);
      }
    }
    std::vector<int> head(t.begin(), t.begin() + k);
    if ((k + 1) % 2 == 0) {
      out = out + x(head);
    } else {
      out = out - x(head);
    }
    return out;
  };
  // merged arguments are checked again by x itself
  return Cochain<Module>(x.module(), k + 1, std::move(rule), x.domain_bound(), "d(" + x.label() + ")");
}

/// (x u y)(t_1..t_{i+j}) = x(t_1..t_i) a_{t_1+..+t_i}(y(t_{i+1}..t_{i+j})).
template <class Module>
Cochain<Module> cup(const Cochain<Module>& x, const Cochain<Module>& y) {
  if (x.module() != y.module()) throw std::invalid_argument("cup of cochains over different modules");
  const int i = x.degree();
  auto rule = [x, y, i](std::span<const int> t) {
    int total = 0;
    for (int s = 0; s < i; ++s) total += t[static_cast<size_t>(s)];
    return x(t.subspan(0, static_cast<size_t>(i))) * x.module()->act(total, y(t.subspan(static_cast<size_t>(i))));
  };
  const int bound = std::min(x.domain_bound(), y.domain_bound());
  return Cochain<Module>(x.module(), i + y.degree(), std::move(rule), bound,
                         "(" + x.label() + " u " + y.label() + ")");
}

/// Uniform integer tuples in [-bound, bound]^arity.
std::vector<std::vector<int>> random_tuples(std::mt19937_64& rng, int count, int arity, int bound);

/// max norm of x over the given argument tuples.
template <class Module>
double max_norm(const Cochain<Module>& x, const std::vector<std::vector<int>>& tuples) {
  double worst = 0.0;
  for (const auto& t : tuples) worst = std::max(worst, x.module()->norm(x(t)));
  return worst;
}

/// max ||dx|| over the tuples (0 for a cocycle).
template <class Module>
double cocycle_residual(const Cochain<Module>& x, const std::vector<std::vector<int>>& tuples) {
  return max_norm(coboundary(x), tuples);
}

template <class Module>
double distance(const Cochain<Module>& x, const Cochain<Module>& y, const std::vector<std::vector<int>>& tuples) {
  double worst = 0.0;
  for (const auto& t : tuples) worst = std::max(worst, x.module()->norm(x(t) - y(t)));
  return worst;
}

/// max ||a_{t+s}(v) - a_t(a_s(v))|| over sample pairs.
template <class Module>
double action_additivity_residual(const Module& module, const typename Module::Value& v,
                                  const std::vector<std::pair<int, int>>& pairs) {
  double worst = 0.0;
  for (const auto& [t, s] : pairs) {
    worst = std::max(worst, module.norm(module.act(t + s, v) - module.act(t, module.act(s, v))));
  }
  return worst;
}

/// Iterated cup product of the generator images along a word; a length-k word
/// lands in degree k.
template <class Module>
Cochain<Module> extend_process(const std::map<std::string, Cochain<Module>>& generators,
                               const std::vector<std::string>& word) {
  if (word.empty()) throw std::invalid_argument("extend_process needs a nonempty word");
  auto lookup = [&](const std::string& symbol) -> const Cochain<Module>& {
    auto it = generators.find(symbol);
    if (it == generators.end()) throw std::invalid_argument("no cochain for symbol '" + symbol + "'");
    if (it->second.degree() != 1) throw std::invalid_argument("generator cochains must have degree 1");
    return it->second;
  };
  Cochain<Module> out = lookup(word.front());
  for (size_t i = 1; i < word.size(); ++i) out = cup(out, lookup(word[i]));
  return out;
}

// ---------------------------------------------------------------- scalar fields

/// Lazily evaluated function of the base point r.
class ScalarField {
 public:
  using Fn = std::function<double(double)>;

  ScalarField() : fn_(std::make_shared<Fn>([](double) { return 0.0; })) {}
  explicit ScalarField(Fn fn) : fn_(std::make_shared<Fn>(std::move(fn))) {}
  static ScalarField constant(double c) {
    return ScalarField([c](double) { return c; });
  }

  double operator()(double r) const { return (*fn_)(r); }

  ScalarField operator+(const ScalarField& o) const;
  ScalarField operator-(const ScalarField& o) const;
  ScalarField operator*(const ScalarField& o) const;
  ScalarField operator*(double c) const;

 private:
  std::shared_ptr<const Fn> fn_;
};

/// (T_t f)(r) = f(r + t), or the trivial action.
class ScalarFieldModule {
 public:
  using Value = ScalarField;

  explicit ScalarFieldModule(std::vector<double> sample_points, bool trivial_action = false);

  Value act(int t, const Value& f) const;
  /// max |f(r)| over the sample points.
  double norm(const Value& f) const;

  bool trivial() const { return trivial_; }
  const std::vector<double>& sample_points() const { return samples_; }

 private:
  std::vector<double> samples_;
  bool trivial_;
};

// ------------------------------------------------------------ lattice operators

/// Matrices on the window with S_t X S_{-t}; values are expected to be
/// centrally localized so that shifts within the domain bound stay exact.
class LatticeOperatorModule {
 public:
  using Value = Matrix;

  explicit LatticeOperatorModule(int half_width) : half_width_(half_width) {}

  Value act(int t, const Value& x) const { return conjugate_by_shift(x, half_width_, t); }
  double norm(const Value& x) const { return max_abs(x); }
  int half_width() const { return half_width_; }

 private:
  int half_width_;
};

// -------------------------------------------------------------------- measures

struct Atom {
  double position = 0.0;
  double mass = 0.0;
};

/// Atoms, a piecewise-constant density on a uniform grid, a multiple of
/// Lebesgue measure and a multiple of counting measure on Z.
struct Measure {
  std::vector<Atom> atoms;
  double grid_origin = 0.0;
  double grid_step = 1.0;
  std::vector<double> cell_densities;  ///< density on [origin + i step, origin + (i+1) step)
  double lebesgue = 0.0;
  double counting = 0.0;
  double domain_lo = -1e6;
  double domain_hi = 1e6;

  static Measure counting_measure() {
    Measure m;
    m.counting = 1.0;
    return m;
  }

  /// nu([a, b)) for a <= b. Throws CochainDomainError outside [domain_lo, domain_hi].
  double interval(double a, double b) const;
  /// I_r(t) = nu([r, r+t)) for t >= 0 and -I_{r+t}(-t) for t < 0.
  double integral(double r, double t) const;
};

using ScalarCochain = Cochain<ScalarFieldModule>;

/// Degree-1 cochain t -> (rho -> I_{rho + r}(t)).
ScalarCochain measure_cocycle(std::shared_ptr<const ScalarFieldModule> module, const Measure& nu, double r,
                              int domain_bound = 1000);

/// I_{r_1..r_k} as the cup product of the measure cocycles at r_1..r_k.
ScalarCochain tensor_cocycle(std::shared_ptr<const ScalarFieldModule> module, const Measure& nu,
                             const std::vector<double>& base_points, int domain_bound = 1000);

/// Degree-k cochain with unstructured pseudo-random values (a smooth field per
/// argument tuple, seeded by hashing the tuple); not a cocycle.
ScalarCochain random_scalar_cochain(std::shared_ptr<const ScalarFieldModule> module, int degree,
                                    std::uint64_t seed, int domain_bound = 1000);

/// Degree-k cochain with random matrices supported on a central block of
/// `block` sites; not a cocycle.
Cochain<LatticeOperatorModule> random_lattice_cochain(std::shared_ptr<const LatticeOperatorModule> module,
                                                      int degree, std::uint64_t seed, int block,
                                                      int domain_bound);

/// Constant cochain x(t..) = c, a-invariant for the trivial action.
ScalarCochain constant_cochain(std::shared_ptr<const ScalarFieldModule> module, int degree, double c);

/// Stable 64-bit mix of a seed and an argument tuple.
std::uint64_t hash_tuple(std::uint64_t seed, std::span<const int> t);

}  // namespace qcohom
