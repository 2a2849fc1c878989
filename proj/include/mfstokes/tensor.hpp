#pragma once

#include <array>
#include <span>
#include <vector>

namespace mfstokes {

/// Dense row-major 1d operator used in tensor-product contractions.
struct Matrix1d {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  double operator()(int r, int c) const { return data[r * cols + c]; }
  double& operator()(int r, int c) { return data[r * cols + c]; }
};

/// Lagrange basis on equispaced nodes i / degree of [0, 1].
class LagrangeBasis1d {
 public:
  explicit LagrangeBasis1d(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  const std::vector<double>& nodes() const { return nodes_; }

  double value(int i, double x) const;
  double derivative(int i, double x) const;

  /// values(q, i) = phi_i(points[q])
  Matrix1d values_at(std::span<const double> points) const;
  Matrix1d derivatives_at(std::span<const double> points) const;

 private:
  int degree_;
  std::vector<double> nodes_;
};

/// Tensor-product Lagrange element of one degree, tabulated at a tensor
/// Gauss rule.
struct TensorBasis {
  int degree = 0;
  int dim = 2;
  LagrangeBasis1d basis{1};
  std::vector<double> quad_points;
  std::vector<double> quad_weights;
  Matrix1d values;       ///< (n_quad_1d x n_nodes_1d)
  Matrix1d derivatives;  ///< (n_quad_1d x n_nodes_1d)

  TensorBasis() = default;
  TensorBasis(int degree, int dim, int n_quad_1d);

  int n_nodes_1d() const { return degree + 1; }
  int n_quad_1d() const { return static_cast<int>(quad_points.size()); }
  int n_nodes() const;
  int n_quad() const;
  /// Reference coordinates of local node i (lexicographic, x fastest).
  std::array<double, 3> node_point(int i) const;
  std::array<double, 3> quad_point(int q) const;
  double quad_weight(int q) const;
};

/// Applies one 1d matrix along direction dir of a tensor with the given
/// extents (x fastest). With transpose the matrix is applied as M^T. The
/// output extent along dir becomes rows (cols for transpose).
void contract_1d(const Matrix1d& m, bool transpose, int dir, const std::array<int, 3>& extents,
                 const double* in, double* out, bool accumulate = false);

/// Chains contract_1d over all directions: out = (M_{d-1} x ... x M_0) in,
/// or the transposed product. scratch must hold the largest intermediate.
void contract_tensor(const std::array<const Matrix1d*, 3>& per_dir, bool transpose, int dim,
                     const double* in, double* out, std::vector<double>& scratch,
                     bool accumulate = false);

}  // namespace mfstokes
