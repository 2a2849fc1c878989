#pragma once

#include "mfstokes/mesh.hpp"
#include "mfstokes/tensor.hpp"
#include "mfstokes/types.hpp"

#include <functional>
#include <memory>
#include <set>
#include <span>
#include <vector>

namespace mfstokes {

/// Vector-valued function of position (velocity boundary data, forcing).
using VectorFunction = std::function<Point(const Point&)>;

/// Taylor-Hood Q_k-Q_{k-1} degree-of-freedom numbering on one mesh level.
///
/// Scalar nodes are numbered in order of first appearance over cells (cell
/// order, then local lexicographic order). Velocity dofs are blocked by
/// component: dof = component * n_scalar_velocity() + node.
///
/// Constraint convention: velocity dofs on boundary faces whose id is in the
/// Dirichlet set are constrained. Operators treat them as eliminated: the
/// input entries are ignored and the output rows are zero; diagonals report
/// 1 there so that Jacobi-type scalings stay finite.
class DofMap {
 public:
  DofMap(std::shared_ptr<const LevelMesh> mesh, int degree, std::set<int> dirichlet_ids,
         bool pressure_mean_constrained);

  const LevelMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const LevelMesh> mesh_ptr() const { return mesh_; }
  int dim() const { return mesh_->dim; }
  int level() const { return mesh_->level; }
  int degree() const { return degree_; }
  int n_cells() const { return mesh_->n_cells(); }

  int n_scalar_velocity() const { return n_scalar_v_; }
  int n_velocity() const { return dim() * n_scalar_v_; }
  int n_pressure() const { return n_p_; }
  int n_total() const { return n_velocity() + n_pressure(); }

  const TensorBasis& velocity_basis() const { return vbasis_; }
  const TensorBasis& pressure_basis() const { return pbasis_; }

  /// Local-to-global maps P_tau (scalar node indices).
  std::span<const int> velocity_nodes(int cell) const;
  std::span<const int> pressure_nodes(int cell) const;
  int velocity_dof(int component, int node) const { return component * n_scalar_v_ + node; }

  const std::vector<Point>& velocity_node_points() const { return vpoints_; }
  const std::vector<Point>& pressure_node_points() const { return ppoints_; }

  const std::set<int>& dirichlet_ids() const { return dirichlet_ids_; }
  bool is_constrained(int velocity_dof) const { return constrained_[velocity_dof] != 0; }
  const std::vector<int>& constrained_dofs() const { return constrained_list_; }
  int n_constrained() const { return static_cast<int>(constrained_list_.size()); }
  /// Sets constrained velocity entries to zero.
  void zero_constrained(Vector& u) const;

  bool pressure_mean_constrained() const { return mean_constrained_; }
  /// w_i = integral of the pressure basis function psi_i over the domain.
  const Vector& pressure_weights() const { return pressure_weights_; }
  double domain_volume() const { return pressure_weights_.sum(); }

  BlockVector zeros() const { return BlockVector(n_velocity(), n_pressure()); }
  void check(const BlockVector& x) const;

 private:
  std::shared_ptr<const LevelMesh> mesh_;
  int degree_;
  std::set<int> dirichlet_ids_;
  bool mean_constrained_;
  TensorBasis vbasis_;
  TensorBasis pbasis_;
  int n_scalar_v_ = 0;
  int n_p_ = 0;
  std::vector<int> cell_v_;
  std::vector<int> cell_p_;
  std::vector<Point> vpoints_;
  std::vector<Point> ppoints_;
  std::vector<char> constrained_;
  std::vector<int> constrained_list_;
  Vector pressure_weights_;
};

/// Throws UnsupportedDegree for degree < 2.
std::shared_ptr<const DofMap> build_dofmap(std::shared_ptr<const LevelMesh> mesh, int degree,
                                           std::set<int> dirichlet_ids,
                                           bool pressure_mean_constrained);

/// Sets constrained velocity entries to the nodal interpolant of the
/// boundary function; all other entries are unchanged.
BlockVector& apply_dirichlet(const DofMap& dofs, const VectorFunction& boundary_value,
                             BlockVector& x);

/// p <- p - (w^T p / w^T 1) 1, so that the pressure field has zero mean.
void pressure_mean_project(const DofMap& dofs, Vector& p);

/// Evaluates a finite element field at a reference point of a cell.
double evaluate_scalar(const DofMap& dofs, bool pressure, int cell, const Point& reference,
                       const Vector& coefficients, int component = 0);

}  // namespace mfstokes
