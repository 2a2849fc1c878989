#include "mfstokes/verify.hpp"

#include "mfstokes/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace mfstokes {

namespace {

/// Element matrices of one cell in local numbering. Velocity dofs are
/// ordered (component, node); nothing is masked.
struct ElementMatrices {
  DenseMatrix A;   // scalar block (nodes x nodes), viscous plus reaction
  DenseMatrix Mv;  // scalar block
  DenseMatrix B;   // np x (dim * nv)
  DenseMatrix Mp;
  DenseMatrix Kp;
};

ElementMatrices element_matrices(const StokesOperator& op, int cell) {
  const DofMap& dm = op.dofs();
  const int dim = dm.dim();
  const int k = dm.degree();
  const LagrangeBasis1d vb(k), pb(k - 1);
  const int nv1 = k + 1, np1 = k;
  int nv = 1, np = 1;
  for (int d = 0; d < dim; ++d) {
    nv *= nv1;
    np *= np1;
  }
  const auto rule = gauss_legendre(k + 1);
  const int q1 = static_cast<int>(rule.points.size());
  int nq = 1;
  for (int d = 0; d < dim; ++d) nq *= q1;

  ElementMatrices e;
  e.A = DenseMatrix::Zero(nv, nv);
  e.Mv = DenseMatrix::Zero(nv, nv);
  e.B = DenseMatrix::Zero(np, dim * nv);
  e.Mp = DenseMatrix::Zero(np, np);
  e.Kp = DenseMatrix::Zero(np, np);

  auto shape = [dim](const LagrangeBasis1d& b, int n1, int i, const Point& xi, Vector& grad_ref) {
    std::array<int, 3> idx{};
    for (int d = 0; d < dim; ++d) {
      idx[d] = i % n1;
      i /= n1;
    }
    double value = 1.0;
    grad_ref = Vector::Ones(dim);
    for (int d = 0; d < dim; ++d) {
      value *= b.value(idx[d], xi[d]);
      for (int g = 0; g < dim; ++g)
        grad_ref[g] *= (g == d) ? b.derivative(idx[d], xi[d]) : b.value(idx[d], xi[d]);
    }
    return value;
  };

  Vector phi(nv), psi(np), gref(dim);
  DenseMatrix gphi(dim, nv), gpsi(dim, np);
  for (int q = 0; q < nq; ++q) {
    Point xi{};
    double w = 1.0;
    int r = q;
    for (int d = 0; d < dim; ++d) {
      xi[d] = rule.points[r % q1];
      w *= rule.weights[r % q1];
      r /= q1;
    }
    const MappedPoint mp = map_point(dm.mesh(), cell, xi);
    const double jxw = mp.det * w;
    auto physical = [&](const Vector& g, DenseMatrix& out, int col) {
      for (int a = 0; a < dim; ++a) {
        double s = 0.0;
        for (int b = 0; b < dim; ++b) s += mp.inverse_transpose[a * 3 + b] * g[b];
        out(a, col) = s;
      }
    };
    for (int i = 0; i < nv; ++i) {
      phi[i] = shape(vb, nv1, i, xi, gref);
      physical(gref, gphi, i);
    }
    for (int i = 0; i < np; ++i) {
      psi[i] = shape(pb, np1, i, xi, gref);
      physical(gref, gpsi, i);
    }
    e.A += jxw * (op.mu() * gphi.transpose() * gphi + op.gamma_rho() * phi * phi.transpose());
    e.Mv += jxw * phi * phi.transpose();
    e.Mp += jxw * psi * psi.transpose();
    e.Kp += jxw * gpsi.transpose() * gpsi;
    for (int c = 0; c < dim; ++c)
      e.B.middleCols(c * nv, nv) -= jxw * psi * gphi.row(c);
  }
  return e;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double lambda_max_sym(const DenseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (m + m.transpose()),
                                                Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  const DenseMatrix g = m.transpose() * m;
  return std::sqrt(std::max(0.0, lambda_max_sym(g)));
}

/// Orthonormal basis of the Euclidean complement of w.
DenseMatrix complement_basis(const Vector& w) {
  const Eigen::Index n = w.size();
  const DenseMatrix wm = w;
  Eigen::HouseholderQR<DenseMatrix> qr(wm);
  const DenseMatrix Q = qr.householderQ() * DenseMatrix::Identity(n, n);
  return Q.rightCols(n - 1);
}

/// Smallest eigenvalue of the pencil (G, M) restricted to the columns of Z.
double min_generalized_eig(const DenseMatrix& G, const DenseMatrix& M, const DenseMatrix* Z) {
  DenseMatrix g = Z ? DenseMatrix(Z->transpose() * G * *Z) : G;
  DenseMatrix m = Z ? DenseMatrix(Z->transpose() * M * *Z) : M;
  g = 0.5 * (g + g.transpose()).eval();
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(g, m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("generalized eigensolver failed");
  return es.eigenvalues().minCoeff();
}

SparseMatrix selection(int n, const std::vector<int>& index) {
  Triplets t;
  for (int j = 0; j < static_cast<int>(index.size()); ++j) t.emplace_back(index[j], j, 1.0);
  return from_triplets(n, static_cast<int>(index.size()), t);
}

std::vector<int> free_velocity(const DofMap& dm) {
  std::vector<int> out;
  for (int i = 0; i < dm.n_velocity(); ++i)
    if (!dm.is_constrained(i)) out.push_back(i);
  return out;
}

}  // namespace

SparseMatrix AssembledSystem::K() const {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.rows());
  Triplets t;
  for (int j = 0; j < A.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(A, j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int j = 0; j < B.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(B, j); it; ++it) {
      t.emplace_back(n + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), n + it.row(), it.value());
    }
  return from_triplets(n + m, n + m, t);
}

AssembledSystem assemble(const StokesOperator& op, int max_dofs) {
  const DofMap& dm = op.dofs();
  if (dm.n_total() > max_dofs)
    throw GuardExceeded("assembly limited to " + std::to_string(max_dofs) + " dofs");
  const int dim = dm.dim();
  const int n = dm.n_velocity();
  const int m = dm.n_pressure();
  const int ns = dm.n_scalar_velocity();
  Triplets ta, tmv, tb, tmp, tkp;
  for (int cell = 0; cell < dm.n_cells(); ++cell) {
    const ElementMatrices e = element_matrices(op, cell);
    const auto vn = dm.velocity_nodes(cell);
    const auto pn = dm.pressure_nodes(cell);
    const int nv = static_cast<int>(vn.size());
    const int np = static_cast<int>(pn.size());
    for (int c = 0; c < dim; ++c)
      for (int i = 0; i < nv; ++i) {
        const int gi = c * ns + vn[i];
        if (dm.is_constrained(gi)) continue;
        for (int j = 0; j < nv; ++j) {
          const int gj = c * ns + vn[j];
          if (dm.is_constrained(gj)) continue;
          ta.emplace_back(gi, gj, e.A(i, j));
          tmv.emplace_back(gi, gj, e.Mv(i, j));
        }
      }
    for (int i = 0; i < np; ++i) {
      for (int c = 0; c < dim; ++c)
        for (int j = 0; j < nv; ++j) {
          const int gj = c * ns + vn[j];
          if (!dm.is_constrained(gj)) tb.emplace_back(pn[i], gj, e.B(i, c * nv + j));
        }
      for (int j = 0; j < np; ++j) {
        tmp.emplace_back(pn[i], pn[j], e.Mp(i, j));
        tkp.emplace_back(pn[i], pn[j], e.Kp(i, j));
      }
    }
  }
  AssembledSystem s;
  s.A = from_triplets(n, n, ta);
  s.Mv = from_triplets(n, n, tmv);
  s.B = from_triplets(m, n, tb);
  s.Mp = from_triplets(m, m, tmp);
  s.Kp = from_triplets(m, m, tkp);
  return s;
}

Vector diag_Sd(const AssembledSystem& system, const DofMap& dofs) {
  Vector out = Vector::Zero(system.B.rows());
  const Vector dA = system.A.diagonal();
  for (int j = 0; j < system.B.outerSize(); ++j) {
    if (dofs.is_constrained(j)) continue;
    if (!(dA[j] > 0.0)) throw SetupError("non-positive diagonal entry of A");
    for (SparseMatrix::InnerIterator it(system.B, j); it; ++it)
      out[it.row()] += it.value() * it.value() / dA[j];
  }
  return out;
}

Vector diag_Sd(const StokesOperator& op, int max_dofs) {
  return diag_Sd(assemble(op, max_dofs), op.dofs());
}

Vector exact_schur_diag(const UzawaSmoother& smoother) {
  return exact_schur_diagonal(smoother.op(),
                              [&smoother](const Vector& r) { return smoother.apply_Ahat_inv(r); });
}

std::vector<int> free_indices(const DofMap& dofs) {
  std::vector<int> out = free_velocity(dofs);
  for (int i = 0; i < dofs.n_pressure(); ++i) out.push_back(dofs.n_velocity() + i);
  return out;
}

DenseMatrix dense_on_free(const DofMap& dofs,
                          const std::function<BlockVector(const BlockVector&)>& f) {
  const int n = dofs.n_velocity();
  return dense_of(
      [&](const Vector& x) { return f(BlockVector::from_stacked(x, n)).stacked(); },
      free_indices(dofs), dofs.n_total());
}

DenseMatrix dense_of(const std::function<Vector(const Vector&)>& f, const std::vector<int>& index,
                     int n) {
  const int k = static_cast<int>(index.size());
  DenseMatrix out(k, k);
  Vector x = Vector::Zero(n);
  for (int j = 0; j < k; ++j) {
    x[index[j]] = 1.0;
    const Vector y = f(x);
    for (int i = 0; i < k; ++i) out(i, j) = y[index[i]];
    x[index[j]] = 0.0;
  }
  return out;
}

double min_eig_difference(const DenseMatrix& m_hat_inverse, const DenseMatrix& m) {
  const DenseMatrix sym = 0.5 * (m_hat_inverse + m_hat_inverse.transpose());
  const DenseMatrix m_hat = sym.inverse();
  const DenseMatrix diff = 0.5 * (m_hat + m_hat.transpose()) - m;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (diff + diff.transpose()),
                                                Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool SpectralReport::lower_bounds_hold(double rel_tol) const {
  return lambda_min_A_gap >= -rel_tol * lambda_max_A && lambda_min_S_gap >= -rel_tol * lambda_max_S;
}

SpectralReport check_spectral_inequalities(const UzawaSmoother& sm) {
  const StokesOperator& op = sm.op();
  const DofMap& dm = op.dofs();
  SpectralReport rep;
  rep.level = dm.level();
  rep.dofs = dm.n_total();
  rep.k_A = sm.k_A();
  rep.k_S = sm.k_S();
  rep.diag = sm.diagonal_choice();

  const auto iu = free_velocity(dm);
  std::vector<int> ip(dm.n_pressure());
  for (int i = 0; i < dm.n_pressure(); ++i) ip[i] = i;

  const DenseMatrix A = dense_of([&](const Vector& v) { return op.apply_A(v); }, iu, dm.n_velocity());
  const DenseMatrix Ahat_inv =
      dense_of([&](const Vector& v) { return sm.apply_Ahat_inv(v); }, iu, dm.n_velocity());
  rep.lambda_max_A = lambda_max_sym(A);
  rep.lambda_min_A_gap = min_eig_difference(Ahat_inv, A);

  const DenseMatrix S =
      dense_of([&](const Vector& v) { return sm.apply_S_tilde(v); }, ip, dm.n_pressure());
  const DenseMatrix Shat_inv =
      dense_of([&](const Vector& v) { return sm.apply_Shat_inv(v); }, ip, dm.n_pressure());
  rep.lambda_max_S = lambda_max_sym(S);
  rep.lambda_min_S_gap = min_eig_difference(Shat_inv, S);

  auto upper = [](const DenseMatrix& hat_inv, double scale, const Vector& D, double beta, int k) {
    // C_M = scale * Mhat, with Mhat^{-1} = scale * C_M^{-1}
    const DenseMatrix sym = 0.5 * (hat_inv + hat_inv.transpose());
    const DenseMatrix C = scale * sym.inverse();
    const Vector s = D.cwiseSqrt().cwiseInverse();
    const DenseMatrix scaled = s.asDiagonal() * C * s.asDiagonal();
    return lambda_max_sym(scaled) / (chebyshev_upper_constant(k) * beta);
  };
  Vector dA(iu.size());
  for (std::size_t i = 0; i < iu.size(); ++i) dA[i] = sm.diag_A()[iu[i]];
  rep.upper_ratio_A = upper(Ahat_inv, sm.sigma(), dA, sm.beta_A(), sm.k_A());
  rep.upper_ratio_S = upper(Shat_inv, sm.tau(), sm.diag_S(), sm.beta_S(), sm.k_S());
  return rep;
}

double InfSupReport::min_per_cell() const {
  return per_cell.empty() ? 0.0 : *std::min_element(per_cell.begin(), per_cell.end());
}

InfSupReport check_infsup(const StokesOperator& op, bool per_cell, int max_dofs) {
  const DofMap& dm = op.dofs();
  const AssembledSystem sys = assemble(op, max_dofs);
  InfSupReport rep;
  rep.level = dm.level();
  rep.dofs = dm.n_total();

  const auto iu = free_velocity(dm);
  const SparseMatrix P = selection(dm.n_velocity(), iu);
  const SparseMatrix Bf = sys.B * P;
  const DenseMatrix Bt = DenseMatrix(Bf.transpose());
  const SparseMatrix Mvf = P.transpose() * sys.Mv * P;
  // full H1 inner product: stiffness plus mass
  SparseMatrix stiff = sys.A - op.gamma_rho() * sys.Mv;
  stiff /= op.mu();
  const SparseMatrix H1 = P.transpose() * (stiff + sys.Mv) * P;

  const DenseMatrix Mp(sys.Mp);
  const DenseMatrix Kp(sys.Kp);
  const DenseMatrix Z = complement_basis(dm.pressure_weights());

  Eigen::SimplicialLDLT<SparseMatrix> h1(H1);
  if (h1.info() != Eigen::Success) throw Error("H1 factorization failed");
  const DenseMatrix G = Bf * DenseMatrix(h1.solve(Bt));
  rep.lbb = std::sqrt(std::max(0.0, min_generalized_eig(G, Mp, dm.pressure_mean_constrained() ? &Z : nullptr)));

  Eigen::SimplicialLDLT<SparseMatrix> mv(Mvf);
  if (mv.info() != Eigen::Success) throw Error("mass factorization failed");
  const DenseMatrix G2 = Bf * DenseMatrix(mv.solve(Bt));
  rep.bercovier_pironneau = min_generalized_eig(G2, Kp, &Z);

  if (per_cell) {
    const int ns = dm.n_scalar_velocity();
    for (int cell = 0; cell < dm.n_cells(); ++cell) {
      const ElementMatrices e = element_matrices(op, cell);
      const auto vn = dm.velocity_nodes(cell);
      const int nv = static_cast<int>(vn.size());
      std::vector<int> loc;
      for (int c = 0; c < dm.dim(); ++c)
        for (int j = 0; j < nv; ++j)
          if (!dm.is_constrained(c * ns + vn[j])) loc.push_back(c * nv + j);
      const int nf = static_cast<int>(loc.size());
      DenseMatrix Bl(e.B.rows(), nf), Ml = DenseMatrix::Zero(nf, nf);
      for (int j = 0; j < nf; ++j) {
        Bl.col(j) = e.B.col(loc[j]);
        for (int i = 0; i < nf; ++i)
          if (loc[i] / nv == loc[j] / nv) Ml(i, j) = e.Mv(loc[i] % nv, loc[j] % nv);
      }
      const DenseMatrix Gl = Bl * Ml.ldlt().solve(DenseMatrix(Bl.transpose()));
      const Vector wl = e.Mp * Vector::Ones(e.Mp.rows());
      const DenseMatrix Zl = complement_basis(wl);
      rep.per_cell.push_back(min_generalized_eig(Gl, e.Kp, &Zl));
    }
  }
  return rep;
}

double mesh_size(const DofMap& dofs) { return dofs.mesh().max_cell_diameter(); }

double xnorm(const DofMap& dofs, const BlockVector& y) {
  const double h = mesh_size(dofs);
  const int d = dofs.dim();
  return std::sqrt(std::pow(h, d - 2) * y.u.squaredNorm() + std::pow(h, d) * y.p.squaredNorm());
}

double xnorm_dual(const DofMap& dofs, const BlockVector& y) {
  const double h = mesh_size(dofs);
  const int d = dofs.dim();
  return std::sqrt(std::pow(h, 2 - d) * y.u.squaredNorm() + std::pow(h, -d) * y.p.squaredNorm());
}

Vector xnorm_weights(const DofMap& dofs) {
  const double h = mesh_size(dofs);
  const int d = dofs.dim();
  const auto idx = free_indices(dofs);
  Vector w(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    w[i] = idx[i] < dofs.n_velocity() ? std::pow(h, d - 2) : std::pow(h, d);
  return w;
}

namespace {

DenseMatrix matrix_power(const DenseMatrix& s, int m) {
  DenseMatrix result = DenseMatrix::Identity(s.rows(), s.cols());
  DenseMatrix base = s;
  while (m > 0) {
    if (m & 1) result = result * base;
    m >>= 1;
    if (m) base = base * base;
  }
  return result;
}

}  // namespace

std::vector<SmoothingRow> measure_smoothing_property(const UzawaSmoother& sm,
                                                     const std::vector<int>& m_list,
                                                     int max_dofs) {
  const StokesOperator& op = sm.op();
  const DofMap& dm = op.dofs();
  if (dm.n_total() > max_dofs)
    throw GuardExceeded("smoothing measurement limited to " + std::to_string(max_dofs) + " dofs");
  const DenseMatrix K = dense_on_free(dm, [&](const BlockVector& x) { return op.apply_K(x); });
  const DenseMatrix Khat_inv =
      dense_on_free(dm, [&](const BlockVector& x) { return sm.apply_Khat_inv(x); });
  const DenseMatrix S = DenseMatrix::Identity(K.rows(), K.cols()) - Khat_inv * K;
  const Vector s = xnorm_weights(dm).cwiseSqrt().cwiseInverse();
  auto weighted = [&](const DenseMatrix& m) {
    return spectral_norm(s.asDiagonal() * m * s.asDiagonal());
  };
  const DenseMatrix Khat = Khat_inv.inverse();
  const double khat_k = weighted(Khat - K);

  std::vector<SmoothingRow> rows;
  for (int m : m_list) {
    SmoothingRow row;
    row.m = m;
    row.norm_KS = weighted(K * matrix_power(S, m));
    row.eta0 = m > 0 ? eta0(m - 1) : 0.0;
    row.norm_Khat_K = khat_k;
    rows.push_back(row);
  }
  return rows;
}

double fitted_decay_exponent(const std::vector<SmoothingRow>& rows) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.m <= 0 || !(r.norm_KS > 0.0)) continue;
    const double x = std::log(static_cast<double>(r.m));
    const double y = std::log(r.norm_KS);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw Error("need at least two positive samples for a fit");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

/// Pseudo-inverse of the free-dof operator: with a constrained mean the
/// constant pressure is shifted away and projected out on both sides.
DenseMatrix operator_inverse(const DofMap& dm, const DenseMatrix& K) {
  if (!dm.pressure_mean_constrained()) return K.inverse();
  const Eigen::Index nf = K.rows();
  const int m = dm.n_pressure();
  Vector e = Vector::Zero(nf);
  e.tail(m).setOnes();
  e.normalize();
  const double c = K.cwiseAbs().maxCoeff();
  const DenseMatrix inv = (K + c * e * e.transpose()).inverse();
  const DenseMatrix proj = DenseMatrix::Identity(nf, nf) - e * e.transpose();
  return proj * inv * proj;
}

}  // namespace

std::vector<ApproximationRow> measure_approximation_property(const Hierarchy& h, int first,
                                                             int last, int max_dofs) {
  for (int l = std::max(first, 1); l <= last; ++l)
    if (h.level(l).dofs->n_total() > max_dofs)
      throw GuardExceeded("approximation measurement limited to " + std::to_string(max_dofs) +
                          " dofs");
  std::vector<ApproximationRow> rows;
  for (int l = std::max(first, 1); l <= last; ++l) {
    const DofMap& fd = *h.level(l).dofs;
    const DofMap& cd = *h.level(l - 1).dofs;
    const StokesOperator& fop = *h.level(l).op;
    const StokesOperator& cop = *h.level(l - 1).op;
    const DenseMatrix Kf = dense_on_free(fd, [&](const BlockVector& x) { return fop.apply_K(x); });
    const DenseMatrix Kc = dense_on_free(cd, [&](const BlockVector& x) { return cop.apply_K(x); });
    const auto fi = free_indices(fd);
    const auto ci = free_indices(cd);
    DenseMatrix P(fi.size(), ci.size());
    Vector xc = Vector::Zero(cd.n_total());
    for (std::size_t j = 0; j < ci.size(); ++j) {
      xc[ci[j]] = 1.0;
      const Vector y =
          h.prolongate(l, BlockVector::from_stacked(xc, cd.n_velocity())).stacked();
      for (std::size_t i = 0; i < fi.size(); ++i) P(i, j) = y[fi[i]];
      xc[ci[j]] = 0.0;
    }
    const DenseMatrix M = operator_inverse(fd, Kf) - P * operator_inverse(cd, Kc) * P.transpose();
    const Vector s = xnorm_weights(fd).cwiseSqrt();
    const DenseMatrix W = s.asDiagonal() * M * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (W + W.transpose()), Eigen::EigenvaluesOnly);
    ApproximationRow row;
    row.level = l;
    row.dofs = fd.n_total();
    row.norm = es.eigenvalues().cwiseAbs().maxCoeff();
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SmoothingRow>& rows) {
  out << "m,norm_KS,eta0_m_minus_1,norm_Khat_minus_K\n";
  for (const auto& r : rows)
    out << r.m << ',' << r.norm_KS << ',' << r.eta0 << ',' << r.norm_Khat_K << '\n';
}

void write_csv(std::ostream& out, const std::vector<ApproximationRow>& rows) {
  out << "level,dofs,norm\n";
  for (const auto& r : rows) out << r.level << ',' << r.dofs << ',' << r.norm << '\n';
}

void write_csv(std::ostream& out, const std::vector<SpectralReport>& rows) {
  out << "level,dofs,k_A,k_S,diag,lambda_max_A,lambda_min_Ahat_minus_A,lambda_max_S,"
         "lambda_min_Shat_minus_S,upper_ratio_A,upper_ratio_S,lower_bounds_hold\n";
  for (const auto& r : rows)
    out << r.level << ',' << r.dofs << ',' << r.k_A << ',' << r.k_S << ',' << to_string(r.diag)
        << ',' << r.lambda_max_A << ',' << r.lambda_min_A_gap << ','
        << r.lambda_max_S << ',' << r.lambda_min_S_gap << ',' << r.upper_ratio_A << ','
        << r.upper_ratio_S << ',' << (r.lower_bounds_hold() ? 1 : 0) << '\n';
}

void write_csv(std::ostream& out, const std::vector<InfSupReport>& rows) {
  out << "level,dofs,lbb,bercovier_pironneau,min_per_cell\n";
  for (const auto& r : rows)
    out << r.level << ',' << r.dofs << ',' << r.lbb << ',' << r.bercovier_pironneau << ','
        << r.min_per_cell() << '\n';
}

}  // namespace mfstokes
