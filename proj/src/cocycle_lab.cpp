#include "qcohom/cocycle_lab.hpp"

#include <cmath>
#include <memory>

namespace qcohom {

namespace {

// (S_m x)(k) = x(k + m) on raw window amplitudes; entries pushed past the edge are dropped.
Vector shift_amplitudes(const Vector& x, int half_width, int m) {
  const int dim = 2 * half_width;
  Vector out = Vector::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    const int src = i + m;
    if (src >= 0 && src < dim) out[i] = x[src];
  }
  return out;
}

// Row-shifted copy: out.row(i) = a.row(i + m).
Matrix shift_rows(const Matrix& a, int m) {
  const auto rows = static_cast<int>(a.rows());
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  const int lo = std::max(0, -m);
  const int hi = std::min(rows, rows - m);
  if (hi > lo) out.middleRows(lo, hi - lo) = a.middleRows(lo + m, hi - lo);
  return out;
}

Matrix thin_orthonormal(const Matrix& a) {
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  // fix the sign freedom of Householder QR so that the diagonal of R is positive
  const Matrix r = qr.matrixQR().topLeftCorner(a.cols(), a.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

void normalize_phase(Vector& v) {
  Eigen::Index pivot = 0;
  v.cwiseAbs().maxCoeff(&pivot);
  if (std::abs(v[pivot]) > 0.0) v *= std::conj(v[pivot]) / std::abs(v[pivot]);
}

}  // namespace

MultiplicativeCocycle MultiplicativeCocycle::from_rule(int half_width, int horizon, Rule rule,
                                                       std::string label) {
  if (half_width <= 0) throw std::invalid_argument("window half-width must be positive");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  MultiplicativeCocycle w;
  w.half_width_ = half_width;
  w.label_ = std::move(label);
  for (int n = 0; n <= horizon; ++n) {
    Matrix m = rule(n);
    if (m.rows() != 2 * half_width || m.cols() != 2 * half_width) {
      throw std::invalid_argument("cocycle rule returned a matrix of the wrong size");
    }
    w.past_.push_back(std::move(m));
  }
  w.rule_ = std::move(rule);
  return w;
}

MultiplicativeCocycle MultiplicativeCocycle::from_family(int half_width, std::vector<Matrix> past,
                                                         std::string label) {
  if (past.empty()) throw std::invalid_argument("cocycle family needs at least W_0");
  for (const auto& m : past) {
    if (m.rows() != 2 * half_width || m.cols() != 2 * half_width) {
      throw std::invalid_argument("cocycle family matrix of the wrong size");
    }
  }
  MultiplicativeCocycle w;
  w.half_width_ = half_width;
  w.past_ = std::move(past);
  w.label_ = std::move(label);
  return w;
}

Matrix MultiplicativeCocycle::at(int t) const {
  if (t <= 0) {
    if (-t <= horizon()) return past_[static_cast<size_t>(-t)];
    if (rule_) return rule_(-t);
    throw std::out_of_range("W_" + std::to_string(t) + " is beyond the stored horizon");
  }
  if (t > horizon()) throw std::out_of_range("W_" + std::to_string(t) + " is beyond the stored horizon");
  return conjugate_by_shift(past_[static_cast<size_t>(t)].adjoint(), half_width_, t);
}

MultiplicativeCocycle MultiplicativeCocycle::certify_markovian(double tolerance) const {
  const auto report = verify_markovian(*this, horizon());
  if (report.residual() > tolerance) {
    throw NonMarkovianError("cocycle '" + label_ + "' is not markovian: residual " +
                            std::to_string(report.residual()));
  }
  MultiplicativeCocycle out = *this;
  out.markovian_tolerance_ = tolerance;
  return out;
}

MultiplicativeCocycle trivial_cocycle(int half_width, int horizon) {
  const int dim = 2 * half_width;
  return MultiplicativeCocycle::from_rule(
      half_width, horizon, [dim](int) { return Matrix(Matrix::Identity(dim, dim)); }, "trivial");
}

MultiplicativeCocycle coboundary_cocycle(const LatticeOperator& j, int horizon) {
  const int half_width = j.dimension() / 2;
  if (j.first_site() != -half_width) throw std::invalid_argument("J must act on the full window");
  auto mat = std::make_shared<const Matrix>(j.matrix());
  return MultiplicativeCocycle::from_rule(
      half_width, horizon,
      [mat, half_width](int n) -> Matrix {
        // W_{-n} = J S_{-n} J* S_n
        return (*mat) * conjugate_by_shift(mat->adjoint(), half_width, -n);
      },
      "coboundary");
}

LatticeOperator random_local_unitary(int half_width, int block, std::mt19937_64& rng) {
  if (block <= 0 || block > 2 * half_width) throw WindowOverflowError("unitary block does not fit the window");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(block, block);
  for (Eigen::Index c = 0; c < block; ++c) {
    for (Eigen::Index r = 0; r < block; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
  }
  const Matrix q = thin_orthonormal(g);
  Matrix u = Matrix::Identity(2 * half_width, 2 * half_width);
  const int first = half_width - block / 2;
  u.block(first, first, block, block) = q;
  return LatticeOperator(std::move(u), -half_width, OperatorTag::unitary);
}

MultiplicativeCocycle markovian_from_inner(const ModelSpaceUnitary& r, int horizon, ConstructorForm form) {
  struct Data {
    int n;
    Matrix m;
    Matrix m_adj;
    Matrix p_v;
    ModelSpaceUnitary r;
    ConstructorForm form;
  };
  const int n = r.space().half_width;
  Matrix m = toeplitz_multiplier(r.space().theta, n).op.matrix();
  Matrix m_adj = m.adjoint();
  Matrix p_v = m * m_adj;
  auto data = std::make_shared<const Data>(Data{n, std::move(m), std::move(m_adj), std::move(p_v), r, form});

  auto rule = [data](int steps) -> Matrix {
    const int half = data->n;
    Matrix w = Matrix::Identity(2 * half, 2 * half);
    auto h0 = w.bottomRightCorner(half, half);
    const int head = std::min(steps, half);
    h0.leftCols(head) = data->m.leftCols(head);
    if (steps < half) {
      const int tail = half - steps;
      const Matrix rk = data->r.power_on_space(steps);
      if (data->form == ConstructorForm::corrected) {
        // (R^n P_K + M S'^n M*) applied to e_{k-n}
        const Matrix shifted_adj = shift_rows(data->m_adj.leftCols(tail), -steps);
        h0.rightCols(tail) = rk.leftCols(tail) + data->m * shifted_adj;
      } else {
        h0.rightCols(tail) = rk.leftCols(tail) + data->p_v.rightCols(tail);
      }
    }
    return w;
  };
  const std::string label = form == ConstructorForm::corrected ? "inner/corrected" : "inner/literal";
  return MultiplicativeCocycle::from_rule(n, horizon, std::move(rule), label);
}

CocycleReport verify_cocycle(const MultiplicativeCocycle& w, int horizon) {
  const int half = w.half_width();
  const int radius = check_radius(half);
  if (horizon > w.horizon()) throw std::out_of_range("verify_cocycle horizon exceeds the stored family");
  if (radius + 2 * horizon >= half) {
    throw WindowOverflowError("horizon " + std::to_string(horizon) + " too large for window N = " +
                              std::to_string(half));
  }
  const int width = 2 * radius;
  const int first = half - radius;  // index of site -radius

  std::vector<Matrix> family;
  for (int t = -horizon; t <= horizon; ++t) family.push_back(w.at(t));
  auto at = [&](int t) -> const Matrix& { return family[static_cast<size_t>(t + horizon)]; };

  CocycleReport report;
  const Matrix id = Matrix::Identity(2 * half, 2 * half);
  report.identity_at_zero = max_abs(at(0) - id);

  for (int t = -horizon; t <= horizon; ++t) {
    const Matrix cols = at(t).middleCols(first, width);
    const Matrix rows = at(t).middleRows(first, width);
    const Matrix eye = Matrix::Identity(width, width);
    report.unitarity_residual = std::max(
        {report.unitarity_residual, max_abs(cols.adjoint() * cols - eye), max_abs(rows * rows.adjoint() - eye)});
  }

  for (int m = -horizon; m <= horizon; ++m) {
    for (int n = -horizon; n <= horizon; ++n) {
      if (std::abs(m + n) > horizon) continue;
      const Matrix lhs = at(m + n).middleCols(first, width);
      // S_{-m} e_k = e_{k+m}
      const Matrix inner = at(n).middleCols(first + m, width);
      const Matrix rhs = at(m) * shift_rows(inner, m);
      const double residual = max_abs(lhs - rhs);
      if (residual > report.cocycle_residual) {
        report.cocycle_residual = residual;
        report.worst_m = m;
        report.worst_n = n;
      }
    }
  }

  for (int n = 1; n <= horizon; ++n) {
    // W_0 = W_n S_n W_{-n} S_{-n} gives W_{-n} = S_{-n} W_n* S_n
    const Matrix back = conjugate_by_shift(at(n).adjoint(), half, -n);
    report.adjoint_residual =
        std::max(report.adjoint_residual, max_abs((at(-n) - back).middleCols(first, width)));
  }
  return report;
}

MarkovianReport verify_markovian(const MultiplicativeCocycle& w, int horizon) {
  const int half = w.half_width();
  const int dim = 2 * half;
  if (horizon > w.horizon()) throw std::out_of_range("verify_markovian horizon exceeds the stored family");
  const Matrix id = Matrix::Identity(dim, dim);
  MarkovianReport report;
  for (int n = 0; n <= horizon && n < half; ++n) {
    const int cols = half - n;  // sites [-N, -n)
    report.future_residual = std::max(report.future_residual, max_abs((w.at(n) - id).leftCols(cols)));
    report.past_residual = std::max(report.past_residual, max_abs((w.at(-n) - id).leftCols(half)));
  }
  return report;
}

IsometrySemigroup::IsometrySemigroup(Matrix generator, int half_width)
    : generator_(std::move(generator)), half_width_(half_width) {
  if (generator_.rows() != half_width || generator_.cols() != half_width) {
    throw std::invalid_argument("isometry generator must be N x N");
  }
  const int interior = std::max(1, half_width / 2);
  const Matrix cols = generator_.leftCols(interior);
  interior_isometry_defect = max_abs(cols.adjoint() * cols - Matrix::Identity(interior, interior));
}

Matrix IsometrySemigroup::power(int n) const {
  if (n < 0) throw std::invalid_argument("semigroup power must be nonnegative");
  Matrix out = Matrix::Identity(half_width_, half_width_);
  for (int i = 0; i < n; ++i) out = generator_ * out;
  return out;
}

IsometrySemigroup associated_isometry(const MultiplicativeCocycle& w) {
  if (!w.markovian_tolerance()) {
    throw NonMarkovianError("associated_isometry needs a cocycle certified markovian");
  }
  const int half = w.half_width();
  const Matrix w1 = w.at(-1);
  Matrix v = Matrix::Zero(half, half);
  // V e_k = W_{-1} e_{k+1}; the last column leaves the window
  v.leftCols(half - 1) = w1.block(half, half + 1, half, half - 1);
  IsometrySemigroup semigroup(std::move(v), half);
  semigroup.leakage = max_abs(w1.block(0, half + 1, half, half - 1));

  const int interior = std::max(1, half / 2);
  Matrix vn = Matrix::Identity(half, half);
  for (int n = 1; n <= w.horizon() && n < half - interior; ++n) {
    vn = semigroup.generator() * vn;
    const Matrix wn = w.at(-n);
    const Matrix direct = wn.block(half, half + n, half, interior);
    semigroup.semigroup_residual =
        std::max(semigroup.semigroup_residual, max_abs(vn.leftCols(interior) - direct));
  }
  return semigroup;
}

WoldData wold_decompose(const IsometrySemigroup& v) {
  const int half = v.half_width();
  const Matrix& gen = v.generator();
  const int n_max = std::max(2, half / 4);
  const int interior = std::max(1, half / 8);
  const int lower_half = std::max(1, half / 2);
  WoldData out;

  // defect space: eigenvectors of I - VV* above 1/2, edge artifacts discarded
  const Matrix defect = Matrix::Identity(half, half) - gen * gen.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> defect_solver(defect);
  out.defect_spectrum = defect_solver.eigenvalues();
  std::vector<Vector> defect_vectors;
  for (Eigen::Index i = 0; i < out.defect_spectrum.size(); ++i) {
    if (out.defect_spectrum[i] <= 0.5) continue;
    Vector d = defect_solver.eigenvectors().col(i);
    const double outside = d.tail(half - lower_half).squaredNorm();
    if (outside > 1e-6) {
      ++out.boundary_modes;
      continue;
    }
    normalize_phase(d);
    defect_vectors.push_back(d);
  }
  out.defect_index = static_cast<int>(defect_vectors.size());

  Eigen::BDCSVD<Matrix> svd(gen);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-8) ++rank;
  }
  out.rank_defect_index = half - rank;

  // unitary part: the nested ranges of V^n seen through the interior coordinates
  Matrix vn = Matrix::Identity(half, half);
  Matrix final_block;
  for (int n = 1; n <= n_max; ++n) {
    vn = gen * vn;
    const Matrix top = vn.topRows(interior);
    final_block = top * top.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(final_block);
    int count = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      if (solver.eigenvalues()[i] > 0.5) ++count;
    }
    out.intersection_dims.push_back(count);
  }
  int stable_from = n_max;
  while (stable_from > 1 && out.intersection_dims[static_cast<size_t>(stable_from - 2)] ==
                                out.intersection_dims.back()) {
    --stable_from;
  }
  out.stabilized_at = stable_from;
  if (stable_from > n_max - std::max(1, n_max / 4)) {
    throw BoundaryContaminationError("range intersection did not stabilize before n_max = " +
                                     std::to_string(n_max) + "; enlarge the window");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> final_solver(final_block);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < final_solver.eigenvalues().size(); ++i) {
    if (final_solver.eigenvalues()[i] > 0.5) kept.push_back(i);
  }
  Matrix seeds = Matrix::Zero(half, static_cast<Eigen::Index>(kept.size()));
  for (size_t c = 0; c < kept.size(); ++c) {
    seeds.col(static_cast<Eigen::Index>(c)).head(interior) = final_solver.eigenvectors().col(kept[c]);
  }
  // pull the truncated seeds back onto range(V^n_max)
  const Matrix refined = vn * (vn.adjoint() * seeds);
  out.unitary_basis = thin_orthonormal(refined);
  for (Eigen::Index c = 0; c < out.unitary_basis.cols(); ++c) {
    Vector col = out.unitary_basis.col(c);
    normalize_phase(col);
    out.unitary_basis.col(c) = col;
  }

  // shift part: {V^n d}
  const int length = lower_half;
  Matrix family(half, static_cast<Eigen::Index>(length * defect_vectors.size()));
  Matrix family_head(half, static_cast<Eigen::Index>((length - 1) * defect_vectors.size()));
  for (size_t j = 0; j < defect_vectors.size(); ++j) {
    Vector x = defect_vectors[j];
    for (int n = 0; n < length; ++n) {
      family.col(static_cast<Eigen::Index>(j * length + n)) = x;
      if (n + 1 < length) family_head.col(static_cast<Eigen::Index>(j * (length - 1) + n)) = x;
      x = gen * x;
    }
  }
  out.shift_forward =
      family.cols() == 0 ? 0.0
                         : max_abs(family.adjoint() * family - Matrix::Identity(family.cols(), family.cols()));
  out.shift_basis = thin_orthonormal(family);

  const Matrix id = Matrix::Identity(half, half);
  const Matrix& u = out.unitary_basis;
  const Matrix& s = out.shift_basis;
  out.mutual_orthogonality = (u.cols() == 0 || s.cols() == 0) ? 0.0 : max_abs(u.adjoint() * s);
  out.unitary_invariance = u.cols() == 0 ? 0.0 : max_abs((id - u * u.adjoint()) * gen * u);
  out.shift_invariance = family_head.cols() == 0 ? 0.0 : max_abs((id - s * s.adjoint()) * gen * family_head);

  out.unitary_part = u.adjoint() * gen * u;
  if (out.unitary_part.rows() > 0) {
    Eigen::ComplexEigenSolver<Matrix> eig(out.unitary_part);
    out.unitary_eigenvalues = eig.eigenvalues();
  } else {
    out.unitary_eigenvalues = Eigen::VectorXcd(0);
  }
  return out;
}

LimitReport limit_cocycle(const MultiplicativeCocycle& w) {
  if (!w.markovian_tolerance()) throw NonMarkovianError("limit_cocycle needs a markovian cocycle");
  const int half = w.half_width();
  if (!w.has_rule() && w.horizon() < half) {
    throw NonStabilizationError("cocycle family too short to stabilize every column of the window");
  }
  Matrix limit = Matrix::Zero(half, half);
  double residual = 0.0;
  for (int n = 1; n <= half; ++n) {
    const Matrix wn = w.at(-n);
    // negative-site rows of H_0 columns must vanish for markovian input
    residual = std::max(residual, max_abs(wn.block(0, half, half, n)));
    const auto h0 = wn.bottomRightCorner(half, half);
    limit.col(n - 1) = h0.col(n - 1);
    if (n > 1) residual = std::max(residual, max_abs(h0.leftCols(n - 1) - limit.leftCols(n - 1)));
  }
  if (residual > 1e-8) {
    throw NonStabilizationError("W_{-n} e_k did not stabilize for n > k (residual " +
                                std::to_string(residual) + ")");
  }

  const int interior = std::max(1, half / 2);
  LimitReport report{LatticeOperator(limit, 0), residual, 0.0, 0.0, half};
  const Matrix cols = limit.leftCols(interior);
  report.isometry_defect = max_abs(cols.adjoint() * cols - Matrix::Identity(interior, interior));

  const auto wold = wold_decompose(associated_isometry(w));
  const Matrix p_range = limit * limit.adjoint();
  const Matrix p_shift = Matrix::Identity(half, half) - wold.unitary_basis * wold.unitary_basis.adjoint();
  report.range_residual = max_abs((p_range - p_shift).topLeftCorner(interior, interior));
  return report;
}

ZetaXiReport zeta_xi(const MultiplicativeCocycle& w, int horizon) {
  const int half = w.half_width();
  if (horizon < 1 || 2 * horizon >= half) throw WindowOverflowError("zeta_xi needs 1 <= horizon < N/2");
  if (!w.has_rule() && horizon > w.horizon()) throw std::out_of_range("zeta_xi horizon beyond the family");

  std::vector<Matrix> past;
  for (int n = 0; n <= horizon; ++n) past.push_back(w.at(-n));
  // U_{-m} x = W_{-m} S_{-m} x
  auto advance = [&](int m, const Vector& x) -> Vector {
    return past[static_cast<size_t>(m)] * shift_amplitudes(x, half, -m);
  };

  ZetaXiReport report{{}, LatticeVector(half), 0.0, 0.0, 0.0, std::exp(-static_cast<double>(horizon))};
  std::vector<Vector> zeta;
  for (int n = 0; n <= horizon; ++n) {
    zeta.push_back(past[static_cast<size_t>(n)] * chi(half, -n).amplitudes());
    report.zeta.emplace_back(half, zeta.back());
  }

  for (int m = 1; m <= horizon; ++m) {
    for (int n = 1; m + n <= horizon; ++n) {
      const Vector diff = zeta[static_cast<size_t>(m + n)] - zeta[static_cast<size_t>(m)] -
                          advance(m, zeta[static_cast<size_t>(n)]);
      report.additive_residual = std::max(report.additive_residual, max_abs(diff));
    }
  }

  for (int n = 1; n <= horizon; ++n) {
    Vector x = zeta[static_cast<size_t>(n)];
    for (int step = 1; step <= horizon; ++step) {
      x = advance(1, x);
      if (step % n == 0) {
        report.orthogonality_residual =
            std::max(report.orthogonality_residual, std::abs(zeta[static_cast<size_t>(n)].dot(x)));
      }
    }
  }

  Vector xi = Vector::Zero(2 * half);
  Vector term = zeta[1];
  for (int n = 0; n <= horizon; ++n) {
    xi += std::exp(-static_cast<double>(n)) * term;
    term = advance(1, term);
  }
  // V* = P_0 S_1 W_{-1}* on H_0
  Vector back = shift_amplitudes(past[1].adjoint() * xi, half, 1);
  back.head(half).setZero();
  report.eigen_residual = max_abs(back - std::exp(-1.0) * xi);
  report.xi = LatticeVector(half, xi);
  return report;
}

HsSeries hs_distance(const MultiplicativeCocycle& w, int n, const std::vector<int>& truncations) {
  const int half = w.half_width();
  const Matrix diff = w.at(n) - Matrix::Identity(2 * half, 2 * half);
  HsSeries series;
  for (int t : truncations) {
    if (t <= 0 || t % 2 != 0 || t > 2 * half) {
      throw WindowOverflowError("truncation " + std::to_string(t) + " must be even and at most 2N");
    }
    series.truncations.push_back(t);
    series.values.push_back(diff.block(half - t / 2, half - t / 2, t, t).norm());
  }
  for (size_t i = 1; i < series.values.size(); ++i) {
    series.increments.push_back(std::abs(series.values[i] - series.values[i - 1]));
  }
  series.monotone = true;
  for (size_t i = 1; i < series.increments.size(); ++i) {
    if (series.increments[i] > series.increments[i - 1] + 1e-15) series.monotone = false;
  }
  series.passed = series.monotone && !series.increments.empty() &&
                  series.increments.back() < kHsCauchyThreshold;
  return series;
}

double coboundary_triviality(const MultiplicativeCocycle& w, const LatticeOperator& j, int horizon) {
  const int half = w.half_width();
  const int radius = check_radius(half);
  const Matrix e = basis_block(half, -radius, radius);
  double residual = 0.0;
  for (int n = -horizon; n <= horizon; ++n) {
    const Matrix s = LatticeOperator::shift_operator(half, n).matrix();
    const Matrix lhs = w.at(n) * (s * e);
    const Matrix rhs = j.matrix() * (s * (j.matrix().adjoint() * e));
    residual = std::max(residual, max_abs(lhs - rhs));
  }
  return residual;
}

}  // namespace qcohom
