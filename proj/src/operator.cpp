#include "mfstokes/operator.hpp"

#include <array>

namespace mfstokes {

LocalTabulation tabulate(const TensorBasis& basis) {
  LocalTabulation t;
  t.n_nodes = basis.n_nodes();
  t.n_quad = basis.n_quad();
  const int n1 = basis.n_nodes_1d();
  const int q1 = basis.n_quad_1d();
  t.values.assign(static_cast<std::size_t>(t.n_nodes) * t.n_quad, 1.0);
  for (int b = 0; b < basis.dim; ++b) t.gradients[b] = t.values;
  for (int i = 0; i < t.n_nodes; ++i) {
    for (int q = 0; q < t.n_quad; ++q) {
      int ri = i;
      int rq = q;
      const std::size_t at = static_cast<std::size_t>(i) * t.n_quad + q;
      for (int d = 0; d < basis.dim; ++d) {
        const double v = basis.values(rq % q1, ri % n1);
        const double g = basis.derivatives(rq % q1, ri % n1);
        t.values[at] *= v;
        for (int b = 0; b < basis.dim; ++b) t.gradients[b][at] *= (b == d) ? g : v;
        ri /= n1;
        rq /= q1;
      }
    }
  }
  return t;
}

StokesOperator::StokesOperator(std::shared_ptr<const DofMap> dofs, double mu, double gamma_rho)
    : dofs_(std::move(dofs)), mu_(mu), gamma_rho_(gamma_rho) {
  const auto& vb = dofs_->velocity_basis();
  nq_ = vb.n_quad();
  std::vector<Point> qp(nq_);
  for (int q = 0; q < nq_; ++q) qp[q] = vb.quad_point(q);
  geometry_.resize(static_cast<std::size_t>(dofs_->n_cells()) * nq_ * 10);
  for (int c = 0; c < dofs_->n_cells(); ++c) {
    const auto maps = cell_mapping(dofs_->mesh(), c, qp);
    for (int q = 0; q < nq_; ++q) {
      double* g = geometry_.data() + (static_cast<std::size_t>(c) * nq_ + q) * 10;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) g[b * 3 + a] = maps[q].inverse_transpose[a * 3 + b];
      g[9] = maps[q].det * vb.quad_weight(q);
    }
  }
}

template <int dim>
void StokesOperator::apply_impl(const BlockVector& x, BlockVector& y, unsigned blocks,
                                bool masked) const {
  const DofMap& dm = *dofs_;
  const auto& vb = dm.velocity_basis();
  const auto& pb = dm.pressure_basis();
  const int nv = vb.n_nodes();
  const int np = pb.n_nodes();
  const int nq = nq_;
  const int ns = dm.n_scalar_velocity();

  const bool use_A = blocks & block_A;
  const bool use_Bt = blocks & block_Bt;
  const bool use_B = blocks & block_B;
  const bool use_Mp = blocks & block_Mp;
  const bool use_Mv = blocks & block_Mv;
  const double reaction = (use_A ? gamma_rho_ : 0.0) + (use_Mv ? 1.0 : 0.0);
  const bool need_grad = use_A || use_B;
  const bool need_uval = reaction != 0.0;
  const bool need_u = need_grad || need_uval;
  const bool need_p = use_Bt || use_Mp;
  const bool out_u = use_A || use_Bt || use_Mv;
  const bool out_p = use_B || use_Mp;
  const bool use_flux = use_A || use_Bt;

  y.u = Vector::Zero(dm.n_velocity());
  y.p = Vector::Zero(dm.n_pressure());

  const Matrix1d* V = &vb.values;
  const Matrix1d* D = &vb.derivatives;
  const Matrix1d* P = &pb.values;
  const std::array<const Matrix1d*, 3> vvv{V, V, V};
  const std::array<const Matrix1d*, 3> ppp{P, P, P};
  std::array<std::array<const Matrix1d*, 3>, 3> grad_dir;
  for (int b = 0; b < 3; ++b)
    for (int d = 0; d < 3; ++d) grad_dir[b][d] = (b == d) ? D : V;

  std::vector<double> uloc(dim * nv), ploc(np), outu(nv), outp(np), scratch;
  std::vector<double> grad(dim * dim * nq), uval(dim * nq), pval(nq);
  std::vector<double> flux(dim * dim * nq), vterm(dim * nq), pterm(nq);

  for (int cell = 0; cell < dm.n_cells(); ++cell) {
    const auto vn = dm.velocity_nodes(cell);
    const auto pn = dm.pressure_nodes(cell);
    if (need_u) {
      for (int c = 0; c < dim; ++c)
        for (int i = 0; i < nv; ++i) {
          const int dof = c * ns + vn[i];
          uloc[c * nv + i] = (masked && dm.is_constrained(dof)) ? 0.0 : x.u[dof];
        }
      for (int c = 0; c < dim; ++c) {
        if (need_grad)
          for (int b = 0; b < dim; ++b)
            contract_tensor(grad_dir[b], false, dim, &uloc[c * nv], &grad[(c * dim + b) * nq],
                            scratch);
        if (need_uval) contract_tensor(vvv, false, dim, &uloc[c * nv], &uval[c * nq], scratch);
      }
    }
    if (need_p) {
      for (int i = 0; i < np; ++i) ploc[i] = x.p[pn[i]];
      contract_tensor(ppp, false, dim, ploc.data(), pval.data(), scratch);
    }

    const double* geo = geometry_.data() + static_cast<std::size_t>(cell) * nq * 10;
    for (int q = 0; q < nq; ++q) {
      const double* ij = geo + q * 10;
      const double jxw = ij[9];
      double gx[dim][dim] = {};
      if (need_grad)
        for (int c = 0; c < dim; ++c)
          for (int a = 0; a < dim; ++a) {
            double s = 0.0;
            for (int b = 0; b < dim; ++b) s += grad[(c * dim + b) * nq + q] * ij[b * 3 + a];
            gx[c][a] = s;
          }
      if (use_flux) {
        for (int c = 0; c < dim; ++c) {
          double f[dim];
          for (int a = 0; a < dim; ++a) f[a] = use_A ? mu_ * gx[c][a] : 0.0;
          if (use_Bt) f[c] -= pval[q];
          for (int b = 0; b < dim; ++b) {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) s += f[a] * ij[b * 3 + a];
            flux[(c * dim + b) * nq + q] = jxw * s;
          }
        }
      }
      if (out_u && need_uval)
        for (int c = 0; c < dim; ++c) vterm[c * nq + q] = jxw * reaction * uval[c * nq + q];
      if (out_p) {
        double t = 0.0;
        if (use_B)
          for (int c = 0; c < dim; ++c) t -= gx[c][c];
        if (use_Mp) t += pval[q];
        pterm[q] = jxw * t;
      }
    }

    if (out_u) {
      for (int c = 0; c < dim; ++c) {
        bool first = true;
        if (use_flux)
          for (int b = 0; b < dim; ++b) {
            contract_tensor(grad_dir[b], true, dim, &flux[(c * dim + b) * nq], outu.data(), scratch,
                            !first);
            first = false;
          }
        if (need_uval) {
          contract_tensor(vvv, true, dim, &vterm[c * nq], outu.data(), scratch, !first);
          first = false;
        }
        if (first) continue;
        for (int i = 0; i < nv; ++i) y.u[c * ns + vn[i]] += outu[i];
      }
    }
    if (out_p) {
      contract_tensor(ppp, true, dim, pterm.data(), outp.data(), scratch);
      for (int i = 0; i < np; ++i) y.p[pn[i]] += outp[i];
    }
  }
  if (masked) dm.zero_constrained(y.u);
}

void StokesOperator::apply(const BlockVector& x, BlockVector& y, unsigned blocks,
                           bool masked) const {
  const DofMap& dm = *dofs_;
  const bool reads_u = blocks & (block_A | block_B | block_Mv);
  const bool reads_p = blocks & (block_Bt | block_Mp);
  if ((reads_u && x.u.size() != dm.n_velocity()) || (reads_p && x.p.size() != dm.n_pressure()))
    throw DimensionMismatch("operator input does not match the level's dof map");
  if (dm.dim() == 2)
    apply_impl<2>(x, y, blocks, masked);
  else
    apply_impl<3>(x, y, blocks, masked);
}

BlockVector StokesOperator::apply_K(const BlockVector& x) const {
  BlockVector y;
  apply(x, y, block_K);
  return y;
}

Vector StokesOperator::apply_A(const Vector& u) const {
  BlockVector y;
  apply(BlockVector(u, Vector()), y, block_A);
  return y.u;
}

Vector StokesOperator::apply_B(const Vector& u) const {
  BlockVector y;
  apply(BlockVector(u, Vector()), y, block_B);
  return y.p;
}

Vector StokesOperator::apply_Bt(const Vector& p) const {
  BlockVector y;
  apply(BlockVector(Vector(), p), y, block_Bt);
  return y.u;
}

Vector StokesOperator::apply_Mp(const Vector& p) const {
  BlockVector y;
  apply(BlockVector(Vector(), p), y, block_Mp);
  return y.p;
}

Vector StokesOperator::apply_Mv(const Vector& u) const {
  BlockVector y;
  apply(BlockVector(u, Vector()), y, block_Mv);
  return y.u;
}

namespace {

// Scalar diagonal entry mu |grad phi_i|^2 + gamma_rho phi_i^2 integrated over
// one cell, shared by all velocity components.
std::vector<double> local_diag_A(const LocalTabulation& t, const double* geo, int dim, double mu,
                                 double gamma_rho) {
  std::vector<double> out(t.n_nodes, 0.0);
  for (int i = 0; i < t.n_nodes; ++i) {
    double s = 0.0;
    for (int q = 0; q < t.n_quad; ++q) {
      const double* ij = geo + q * 10;
      const std::size_t at = static_cast<std::size_t>(i) * t.n_quad + q;
      double g2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        double ga = 0.0;
        for (int b = 0; b < dim; ++b) ga += t.gradients[b][at] * ij[b * 3 + a];
        g2 += ga * ga;
      }
      s += ij[9] * (mu * g2 + gamma_rho * t.values[at] * t.values[at]);
    }
    out[i] = s;
  }
  return out;
}

}  // namespace

Vector StokesOperator::compute_diag_A() const {
  const DofMap& dm = *dofs_;
  const auto t = tabulate(dm.velocity_basis());
  const int ns = dm.n_scalar_velocity();
  Vector diag = Vector::Zero(dm.n_velocity());
  for (int cell = 0; cell < dm.n_cells(); ++cell) {
    const auto local = local_diag_A(t, geometry_.data() + static_cast<std::size_t>(cell) * nq_ * 10,
                                    dm.dim(), mu_, gamma_rho_);
    const auto vn = dm.velocity_nodes(cell);
    for (int c = 0; c < dm.dim(); ++c)
      for (int i = 0; i < t.n_nodes; ++i) diag[c * ns + vn[i]] += local[i];
  }
  for (int dof : dm.constrained_dofs()) diag[dof] = 1.0;
  return diag;
}

Vector StokesOperator::compute_diag_Mp() const {
  const DofMap& dm = *dofs_;
  const auto t = tabulate(dm.pressure_basis());
  Vector diag = Vector::Zero(dm.n_pressure());
  for (int cell = 0; cell < dm.n_cells(); ++cell) {
    const double* geo = geometry_.data() + static_cast<std::size_t>(cell) * nq_ * 10;
    const auto pn = dm.pressure_nodes(cell);
    for (int i = 0; i < t.n_nodes; ++i) {
      double s = 0.0;
      for (int q = 0; q < t.n_quad; ++q) {
        const double v = t.values[static_cast<std::size_t>(i) * t.n_quad + q];
        s += geo[q * 10 + 9] * v * v;
      }
      diag[pn[i]] += s;
    }
  }
  return diag;
}

Vector StokesOperator::compute_schur_diag_local() const {
  const DofMap& dm = *dofs_;
  const int dim = dm.dim();
  const auto tv = tabulate(dm.velocity_basis());
  const auto tp = tabulate(dm.pressure_basis());
  const int ns = dm.n_scalar_velocity();
  Vector diag = Vector::Zero(dm.n_pressure());
  std::vector<double> gx(static_cast<std::size_t>(dim) * tv.n_nodes * nq_);
  for (int cell = 0; cell < dm.n_cells(); ++cell) {
    const double* geo = geometry_.data() + static_cast<std::size_t>(cell) * nq_ * 10;
    const auto dA = local_diag_A(tv, geo, dim, mu_, gamma_rho_);
    const auto vn = dm.velocity_nodes(cell);
    const auto pn = dm.pressure_nodes(cell);
    // physical gradients of the velocity shape functions, [(c * nv + j) * nq + q]
    for (int j = 0; j < tv.n_nodes; ++j)
      for (int q = 0; q < nq_; ++q) {
        const std::size_t at = static_cast<std::size_t>(j) * nq_ + q;
        for (int c = 0; c < dim; ++c) {
          double s = 0.0;
          for (int b = 0; b < dim; ++b) s += tv.gradients[b][at] * geo[q * 10 + b * 3 + c];
          gx[(static_cast<std::size_t>(c) * tv.n_nodes + j) * nq_ + q] = s;
        }
      }
    for (int i = 0; i < tp.n_nodes; ++i) {
      double s = 0.0;
      for (int c = 0; c < dim; ++c)
        for (int j = 0; j < tv.n_nodes; ++j) {
          if (dm.is_constrained(c * ns + vn[j])) continue;
          if (!(dA[j] > 0.0)) throw SetupError("non-positive entry in an element diagonal of A");
          double b = 0.0;
          for (int q = 0; q < nq_; ++q)
            b -= geo[q * 10 + 9] * tp.values[static_cast<std::size_t>(i) * nq_ + q] *
                 gx[(static_cast<std::size_t>(c) * tv.n_nodes + j) * nq_ + q];
          s += b * b / dA[j];
        }
      diag[pn[i]] += s;
    }
  }
  return diag;
}

Vector StokesOperator::rhs(const VectorFunction& f) const {
  const DofMap& dm = *dofs_;
  const auto& vb = dm.velocity_basis();
  const auto t = tabulate(vb);
  const int ns = dm.n_scalar_velocity();
  Vector out = Vector::Zero(dm.n_velocity());
  for (int cell = 0; cell < dm.n_cells(); ++cell) {
    const double* geo = geometry_.data() + static_cast<std::size_t>(cell) * nq_ * 10;
    const auto vn = dm.velocity_nodes(cell);
    for (int q = 0; q < nq_; ++q) {
      const Point fx = f(map_point(dm.mesh(), cell, vb.quad_point(q)).x);
      const double jxw = geo[q * 10 + 9];
      for (int i = 0; i < t.n_nodes; ++i) {
        const double v = jxw * t.values[static_cast<std::size_t>(i) * nq_ + q];
        for (int c = 0; c < dm.dim(); ++c) out[c * ns + vn[i]] += v * fx[c];
      }
    }
  }
  dm.zero_constrained(out);
  return out;
}

}  // namespace mfstokes
