#include "mfstokes/multigrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace mfstokes {

std::string to_string(CycleType cycle) { return cycle == CycleType::V ? "V" : "W"; }

CycleType parse_cycle(const std::string& name) {
  if (name == "V" || name == "v") return CycleType::V;
  if (name == "W" || name == "w") return CycleType::W;
  throw ParseError("unknown cycle '" + name + "' (expected V or W)");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::diverged: return "diverged";
  }
  return "?";
}

namespace {

std::array<Matrix1d, 2> embedding(const LagrangeBasis1d& basis) {
  std::array<Matrix1d, 2> e;
  for (int bit = 0; bit < 2; ++bit) {
    e[bit] = Matrix1d{basis.size(), basis.size(), {}};
    e[bit].data.resize(basis.size() * basis.size());
    for (int i = 0; i < basis.size(); ++i)
      for (int j = 0; j < basis.size(); ++j)
        e[bit](i, j) = basis.value(j, 0.5 * (bit + basis.nodes()[i]));
  }
  return e;
}

Vector inverse_multiplicity(int n, int n_cells, int per_cell,
                            const std::function<std::span<const int>(int)>& nodes) {
  Vector w = Vector::Zero(n);
  for (int c = 0; c < n_cells; ++c)
    for (int i = 0; i < per_cell; ++i) w[nodes(c)[i]] += 1.0;
  return w.cwiseInverse();
}

}  // namespace

Transfer::Transfer(std::shared_ptr<const DofMap> coarse, std::shared_ptr<const DofMap> fine)
    : coarse_(std::move(coarse)), fine_(std::move(fine)) {
  const LevelMesh& cm = coarse_->mesh();
  const LevelMesh& fm = fine_->mesh();
  if (fm.parent_of.size() != fm.cells.size() || cm.children_of.size() != cm.cells.size())
    throw SetupError("transfer needs parent/child links between the two levels");
  velocity_embedding_ = embedding(coarse_->velocity_basis().basis);
  pressure_embedding_ = embedding(coarse_->pressure_basis().basis);
  child_index_.resize(fm.n_cells());
  const int nchild = 1 << fm.dim;
  for (int f = 0; f < fm.n_cells(); ++f) {
    const auto& kids = cm.children_of[fm.parent_of[f]];
    const auto it = std::find(kids.begin(), kids.begin() + nchild, f);
    if (it == kids.begin() + nchild) throw SetupError("inconsistent parent/child links");
    child_index_[f] = static_cast<int>(it - kids.begin());
  }
  const DofMap& fd = *fine_;
  velocity_weight_ =
      inverse_multiplicity(fd.n_scalar_velocity(), fd.n_cells(), fd.velocity_basis().n_nodes(),
                           [&fd](int c) { return fd.velocity_nodes(c); });
  pressure_weight_ =
      inverse_multiplicity(fd.n_pressure(), fd.n_cells(), fd.pressure_basis().n_nodes(),
                           [&fd](int c) { return fd.pressure_nodes(c); });
}

void Transfer::apply(const BlockVector& in, BlockVector& out, bool transpose) const {
  const DofMap& cd = *coarse_;
  const DofMap& fd = *fine_;
  const int dim = fd.dim();
  const DofMap& src = transpose ? fd : cd;
  const DofMap& dst = transpose ? cd : fd;
  src.check(in);
  out = dst.zeros();

  const int nv = fd.velocity_basis().n_nodes();
  const int np = fd.pressure_basis().n_nodes();
  const int nsc = cd.n_scalar_velocity();
  const int nsf = fd.n_scalar_velocity();
  std::vector<double> a(std::max(nv, np)), b(std::max(nv, np)), scratch;

  for (int f = 0; f < fd.n_cells(); ++f) {
    const int parent = fd.mesh().parent_of[f];
    const int child = child_index_[f];
    std::array<const Matrix1d*, 3> ev{}, ep{};
    for (int d = 0; d < 3; ++d) {
      const int bit = (child >> d) & 1;
      ev[d] = &velocity_embedding_[d < dim ? bit : 0];
      ep[d] = &pressure_embedding_[d < dim ? bit : 0];
    }
    const auto cvn = cd.velocity_nodes(parent);
    const auto fvn = fd.velocity_nodes(f);
    const auto cpn = cd.pressure_nodes(parent);
    const auto fpn = fd.pressure_nodes(f);

    for (int c = 0; c < dim; ++c) {
      if (!transpose) {
        for (int i = 0; i < nv; ++i) {
          const int dof = c * nsc + cvn[i];
          a[i] = cd.is_constrained(dof) ? 0.0 : in.u[dof];
        }
        contract_tensor(ev, false, dim, a.data(), b.data(), scratch);
        for (int i = 0; i < nv; ++i) out.u[c * nsf + fvn[i]] += velocity_weight_[fvn[i]] * b[i];
      } else {
        for (int i = 0; i < nv; ++i) {
          const int dof = c * nsf + fvn[i];
          a[i] = fd.is_constrained(dof) ? 0.0 : velocity_weight_[fvn[i]] * in.u[dof];
        }
        contract_tensor(ev, true, dim, a.data(), b.data(), scratch);
        for (int i = 0; i < nv; ++i) out.u[c * nsc + cvn[i]] += b[i];
      }
    }
    if (!transpose) {
      for (int i = 0; i < np; ++i) a[i] = in.p[cpn[i]];
      contract_tensor(ep, false, dim, a.data(), b.data(), scratch);
      for (int i = 0; i < np; ++i) out.p[fpn[i]] += pressure_weight_[fpn[i]] * b[i];
    } else {
      for (int i = 0; i < np; ++i) a[i] = pressure_weight_[fpn[i]] * in.p[fpn[i]];
      contract_tensor(ep, true, dim, a.data(), b.data(), scratch);
      for (int i = 0; i < np; ++i) out.p[cpn[i]] += b[i];
    }
  }
  dst.zero_constrained(out.u);
}

BlockVector Transfer::prolongate(const BlockVector& coarse) const {
  BlockVector out;
  apply(coarse, out, false);
  return out;
}

BlockVector Transfer::restrict(const BlockVector& fine) const {
  BlockVector out;
  apply(fine, out, true);
  return out;
}

CoarseSolver::CoarseSolver(std::shared_ptr<const StokesOperator> op) : op_(std::move(op)) {
  const DofMap& dm = op_->dofs();
  const int n = dm.n_velocity();
  for (int i = 0; i < n; ++i)
    if (!dm.is_constrained(i)) free_.push_back(i);
  for (int i = 0; i < dm.n_pressure(); ++i) free_.push_back(n + i);
  const int nf = size();

  Eigen::MatrixXd K(nf, nf);
  Vector x = Vector::Zero(dm.n_total());
  for (int j = 0; j < nf; ++j) {
    x[free_[j]] = 1.0;
    const Vector col = op_->apply_K(BlockVector::from_stacked(x, n)).stacked();
    for (int i = 0; i < nf; ++i) K(i, j) = col[free_[i]];
    x[free_[j]] = 0.0;
  }
  if (dm.pressure_mean_constrained()) {
    const int m = dm.n_pressure();
    const double c = K.cwiseAbs().maxCoeff() / m;
    K.bottomRightCorner(m, m).array() += c;
  }
  lu_.compute(K);
  if (!(lu_.rcond() > 1e-14)) throw SetupError("coarse-level operator is singular");
}

BlockVector CoarseSolver::solve(const BlockVector& r) const {
  const DofMap& dm = op_->dofs();
  dm.check(r);
  const Vector rs = r.stacked();
  Vector rf(size());
  for (int i = 0; i < size(); ++i) rf[i] = rs[free_[i]];
  const Vector xf = lu_.solve(rf);
  Vector xs = Vector::Zero(dm.n_total());
  for (int i = 0; i < size(); ++i) xs[free_[i]] = xf[i];
  BlockVector x = BlockVector::from_stacked(xs, dm.n_velocity());
  if (dm.pressure_mean_constrained()) pressure_mean_project(dm, x.p);
  return x;
}

Hierarchy::Hierarchy(const std::vector<LevelMesh>& meshes, ProblemData problem,
                     MultigridSettings settings)
    : problem_(std::move(problem)), settings_(std::move(settings)) {
  if (meshes.empty()) throw SetupError("empty mesh hierarchy");
  if (settings_.smoothing_steps < 0) throw SetupError("smoothing steps must be non-negative");
  for (std::size_t l = 0; l < meshes.size(); ++l) {
    Level lev;
    lev.mesh = std::make_shared<const LevelMesh>(meshes[l]);
    lev.dofs = build_dofmap(lev.mesh, problem_.degree, problem_.dirichlet_ids,
                            problem_.pressure_mean_constrained);
    lev.op = std::make_shared<const StokesOperator>(lev.dofs, problem_.mu, problem_.gamma_rho);
    if (l > 0) {
      lev.smoother = setup_uzawa(lev.op, settings_.k_A, settings_.k_S, settings_.diag,
                                 settings_.estimate);
      transfers_.emplace_back(levels_.back().dofs, lev.dofs);
    }
    levels_.push_back(std::move(lev));
  }
  coarse_ = std::make_unique<CoarseSolver>(levels_[0].op);
  visits_.assign(levels_.size(), 0);
}

BlockVector Hierarchy::prolongate(int l, const BlockVector& coarse) const {
  return transfer(l).prolongate(coarse);
}

BlockVector Hierarchy::restrict(int l, const BlockVector& fine) const {
  return transfer(l).restrict(fine);
}

BlockVector Hierarchy::coarse_solve(const BlockVector& r) const { return coarse_->solve(r); }

void Hierarchy::reset_visits() const { std::fill(visits_.begin(), visits_.end(), 0); }

void Hierarchy::cycle(int l, BlockVector& x, const BlockVector& b) const {
  ++visits_[l];
  if (l == 0) {
    x = coarse_solve(b);
    return;
  }
  const Level& lev = levels_[l];
  for (int i = 0; i < settings_.smoothing_steps; ++i) lev.smoother->step(x, b);
  BlockVector r = b - lev.op->apply_K(x);
  lev.dofs->zero_constrained(r.u);
  const BlockVector rc = restrict(l, r);
  BlockVector ec = levels_[l - 1].dofs->zeros();
  for (int g = 0; g < static_cast<int>(settings_.cycle); ++g) cycle(l - 1, ec, rc);
  x += prolongate(l, ec);
  for (int i = 0; i < settings_.smoothing_steps; ++i) lev.smoother->step(x, b);
}

BlockVector Hierarchy::dirichlet_lift() const {
  const DofMap& dm = *levels_.back().dofs;
  BlockVector x = dm.zeros();
  if (problem_.boundary_value) apply_dirichlet(dm, problem_.boundary_value, x);
  return x;
}

BlockVector Hierarchy::system_rhs() const {
  const Level& fine = levels_.back();
  BlockVector b = fine.dofs->zeros();
  if (problem_.forcing) b.u = fine.op->rhs(problem_.forcing);
  const BlockVector lift = dirichlet_lift();
  BlockVector klift;
  fine.op->apply(lift, klift, block_K, false);
  b -= klift;
  fine.dofs->zero_constrained(b.u);
  return b;
}

SolveResult Hierarchy::solve(const BlockVector& b, double tol, int max_iter) const {
  using clock = std::chrono::steady_clock;
  const Level& fine = levels_.back();
  const DofMap& dm = *fine.dofs;
  dm.check(b);
  SolveResult result;
  result.x = dm.zeros();
  auto residual = [&] {
    BlockVector r = b - fine.op->apply_K(result.x);
    dm.zero_constrained(r.u);
    return r.norm();
  };
  const double r0 = residual();
  result.residuals.push_back(r0);
  if (r0 == 0.0) {
    result.status = SolveStatus::converged;
    return result;
  }
  int growth = 0;
  result.status = SolveStatus::max_iter;
  for (int it = 0; it < max_iter; ++it) {
    const auto start = clock::now();
    cycle(finest(), result.x, b);
    if (dm.pressure_mean_constrained()) pressure_mean_project(dm, result.x.p);
    const double r = residual();
    result.iteration_seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
    const double prev = result.residuals.back();
    result.residuals.push_back(r);
    if (!std::isfinite(r)) {
      result.status = SolveStatus::diverged;
      break;
    }
    if (r <= tol * r0) {
      result.status = SolveStatus::converged;
      break;
    }
    growth = r > 10.0 * prev ? growth + 1 : 0;
    if (growth >= 3) {
      result.status = SolveStatus::diverged;
      break;
    }
  }
  return result;
}

}  // namespace mfstokes
