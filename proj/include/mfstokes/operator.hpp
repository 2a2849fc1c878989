#pragma once

#include "mfstokes/fespace.hpp"
#include "mfstokes/types.hpp"

#include <memory>
#include <vector>

namespace mfstokes {

/// Block selection for StokesOperator::apply.
enum Blocks : unsigned {
  block_A = 1u,   ///< viscous term plus reaction gamma_rho * M_v
  block_Bt = 2u,  ///< pressure gradient coupling into the velocity rows
  block_B = 4u,   ///< divergence rows
  block_Mp = 8u,  ///< pressure mass matrix
  block_Mv = 16u, ///< velocity mass matrix (no coefficient)
  block_K = block_A | block_Bt | block_B,
};

/// Matrix-free saddle-point operator
///   K = [[A, B^T], [B, 0]],  a(u, v) = mu (grad u, grad v) + gamma_rho (u, v),
///   b(u, q) = -(q, div u),
/// applied cell by cell with sum-factorized kernels. Geometry is stored per
/// quadrature point; no element or global matrices are kept.
class StokesOperator {
 public:
  StokesOperator(std::shared_ptr<const DofMap> dofs, double mu, double gamma_rho = 0.0);

  const DofMap& dofs() const { return *dofs_; }
  std::shared_ptr<const DofMap> dofs_ptr() const { return dofs_; }
  double mu() const { return mu_; }
  double gamma_rho() const { return gamma_rho_; }

  /// y = sum over cells of P_tau K_tau P_tau^T x for the selected blocks.
  /// With masked = true constrained velocity inputs are ignored and
  /// constrained velocity outputs are zero.
  void apply(const BlockVector& x, BlockVector& y, unsigned blocks = block_K,
             bool masked = true) const;

  BlockVector apply_K(const BlockVector& x) const;
  Vector apply_A(const Vector& u) const;
  Vector apply_B(const Vector& u) const;
  Vector apply_Bt(const Vector& p) const;
  Vector apply_Mp(const Vector& p) const;
  Vector apply_Mv(const Vector& u) const;

  /// Exact diagonal of A; 1 on constrained rows.
  Vector compute_diag_A() const;
  /// Exact diagonal of M_p.
  Vector compute_diag_Mp() const;
  /// sum_tau P_tau^T diag(B_tau diag(A_tau)^{-1} B_tau^T) P_tau over the free
  /// local velocity dofs.
  Vector compute_schur_diag_local() const;

  /// Load vector (f, phi_i) for the velocity test functions; zero on
  /// constrained rows.
  Vector rhs(const VectorFunction& f) const;

 private:
  template <int dim>
  void apply_impl(const BlockVector& x, BlockVector& y, unsigned blocks, bool masked) const;

  std::shared_ptr<const DofMap> dofs_;
  double mu_;
  double gamma_rho_;
  int nq_ = 0;
  // per cell and quadrature point: d xi_b / d x_a stored at [b * 3 + a], then JxW
  std::vector<double> geometry_;
};

/// Values and reference gradients of every local basis function at every
/// quadrature point of the basis' own rule, as flat tables [i * n_quad + q].
struct LocalTabulation {
  int n_nodes = 0;
  int n_quad = 0;
  std::vector<double> values;
  std::array<std::vector<double>, 3> gradients;
};

LocalTabulation tabulate(const TensorBasis& basis);

}  // namespace mfstokes
