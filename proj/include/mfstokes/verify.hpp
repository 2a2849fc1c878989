#pragma once

#include "mfstokes/multigrid.hpp"
#include "mfstokes/operator.hpp"
#include "mfstokes/smoother.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <vector>

namespace mfstokes {

using SparseMatrix = Eigen::SparseMatrix<double>;
using DenseMatrix = Eigen::MatrixXd;

/// Classical element-matrix assembly of all blocks with the operator's
/// quadrature and constraint conventions: rows and columns of constrained
/// velocity dofs are empty.
struct AssembledSystem {
  SparseMatrix A;   ///< n x n, viscous plus reaction term
  SparseMatrix B;   ///< m x n, b(u, q) = -(q, div u)
  SparseMatrix Mp;  ///< m x m
  SparseMatrix Mv;  ///< n x n
  SparseMatrix Kp;  ///< m x m, pressure stiffness (grad p, grad q)

  /// [[A, B^T], [B, 0]]
  SparseMatrix K() const;
};

/// Throws GuardExceeded above max_dofs total dofs.
AssembledSystem assemble(const StokesOperator& op, int max_dofs = 20000);

/// (Dtilde_Sd)_ii = sum_j B_ij^2 / A_jj over the free velocity dofs.
/// Throws GuardExceeded above max_dofs total dofs.
Vector diag_Sd(const StokesOperator& op, int max_dofs = 1000000);
Vector diag_Sd(const AssembledSystem& system, const DofMap& dofs);

/// diag(B Ahat^{-1} B^T) for the smoother's Ahat.
Vector exact_schur_diag(const UzawaSmoother& smoother);

/// Free dofs of a level in stacked (u, p) numbering.
std::vector<int> free_indices(const DofMap& dofs);
/// Dense matrix of a linear map on the stacked (u, p) vector restricted to
/// the free dofs, built from unit vectors.
DenseMatrix dense_on_free(const DofMap& dofs, const std::function<BlockVector(const BlockVector&)>& f);
/// Dense matrix of a vector map restricted to the given index set.
DenseMatrix dense_of(const std::function<Vector(const Vector&)>& f, const std::vector<int>& index,
                     int n);
/// lambda_min(Mhat - M) for symmetric positive definite Mhat given through
/// its inverse.
double min_eig_difference(const DenseMatrix& m_hat_inverse, const DenseMatrix& m);

struct SpectralReport {
  int level = 0;
  int dofs = 0;
  int k_A = 0;
  int k_S = 0;
  DiagonalChoice diag = DiagonalChoice::loc;
  double lambda_max_A = 0.0;
  double lambda_min_A_gap = 0.0;  ///< lambda_min(Ahat - A)
  double lambda_max_S = 0.0;
  double lambda_min_S_gap = 0.0;  ///< lambda_min(Shat - Stilde)
  /// lambda_max(D^{-1/2} C_M D^{-1/2}) / (c2 beta) for both blocks; Lemma
  /// bound holds when <= 1.
  double upper_ratio_A = 0.0;
  double upper_ratio_S = 0.0;
  bool lower_bounds_hold(double rel_tol = 1e-8) const;
};

SpectralReport check_spectral_inequalities(const UzawaSmoother& smoother);

struct InfSupReport {
  int level = 0;
  int dofs = 0;
  double lbb = 0.0;                ///< smallest nonzero generalized singular value, (H1, L2)
  double bercovier_pironneau = 0.0;  ///< lambda_min(B Mv^{-1} B^T, Kp) on zero-mean pressures
  std::vector<double> per_cell;     ///< elementwise analogue
  double min_per_cell() const;
};

InfSupReport check_infsup(const StokesOperator& op, bool per_cell = true, int max_dofs = 20000);

/// Mesh size used by the mesh-dependent norms: the largest cell diameter.
double mesh_size(const DofMap& dofs);
/// (h^{d-2} |v|^2 + h^d |q|^2)^{1/2}
double xnorm(const DofMap& dofs, const BlockVector& y);
/// Dual norm (h^{2-d} |v|^2 + h^{-d} |q|^2)^{1/2}
double xnorm_dual(const DofMap& dofs, const BlockVector& y);
/// Diagonal of the X-norm weight on the free dofs.
Vector xnorm_weights(const DofMap& dofs);

struct SmoothingRow {
  int m = 0;
  double norm_KS = 0.0;     ///< |K S^m|_{X -> X*}
  double eta0 = 0.0;        ///< eta0(m - 1), 0 for m = 0
  double norm_Khat_K = 0.0; ///< |Khat - K|_{X -> X*}
};

/// Dense computation; throws GuardExceeded above max_dofs total dofs.
std::vector<SmoothingRow> measure_smoothing_property(const UzawaSmoother& smoother,
                                                     const std::vector<int>& m_list,
                                                     int max_dofs = 4000);

/// Least-squares slope of log(norm) against log(m).
double fitted_decay_exponent(const std::vector<SmoothingRow>& rows);

struct ApproximationRow {
  int level = 0;  ///< fine level of the pair
  int dofs = 0;
  double norm = 0.0;  ///< |(K^{-1} - P K_c^{-1} R)|_{X* -> X}
};

/// One row per level pair (l - 1, l) for l in [first, last]. Throws
/// GuardExceeded when a fine level has more than max_dofs total dofs.
std::vector<ApproximationRow> measure_approximation_property(const Hierarchy& hierarchy,
                                                             int first_fine_level,
                                                             int last_fine_level,
                                                             int max_dofs = 4000);

void write_csv(std::ostream& out, const std::vector<SmoothingRow>& rows);
void write_csv(std::ostream& out, const std::vector<ApproximationRow>& rows);
void write_csv(std::ostream& out, const std::vector<SpectralReport>& rows);
void write_csv(std::ostream& out, const std::vector<InfSupReport>& rows);

}  // namespace mfstokes
