#include "mfstokes/tensor.hpp"

#include "mfstokes/quadrature.hpp"
#include "mfstokes/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace mfstokes {

QuadratureRule1d gauss_legendre(int n) {
  if (n < 1) throw Error("quadrature needs at least one point");
  // (P_n(x), P_{n-1}(x)) by the three-term recurrence
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::pair{p1, p0};
  };
  QuadratureRule1d rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre(x);
      const double dx = pn / (n * (x * pn - pm) / (x * x - 1.0));
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(x);
    const double dp = n * (x * pn - pm) / (x * x - 1.0);
    // nodes come out in descending order on [-1, 1]; store ascending on [0, 1]
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

LagrangeBasis1d::LagrangeBasis1d(int degree) : degree_(degree) {
  if (degree < 0) throw UnsupportedDegree("negative polynomial degree");
  nodes_.resize(degree + 1);
  for (int i = 0; i <= degree; ++i) nodes_[i] = degree == 0 ? 0.5 : static_cast<double>(i) / degree;
}

double LagrangeBasis1d::value(int i, double x) const {
  double v = 1.0;
  for (int j = 0; j <= degree_; ++j)
    if (j != i) v *= (x - nodes_[j]) / (nodes_[i] - nodes_[j]);
  return v;
}

double LagrangeBasis1d::derivative(int i, double x) const {
  double sum = 0.0;
  for (int l = 0; l <= degree_; ++l) {
    if (l == i) continue;
    double term = 1.0 / (nodes_[i] - nodes_[l]);
    for (int j = 0; j <= degree_; ++j)
      if (j != i && j != l) term *= (x - nodes_[j]) / (nodes_[i] - nodes_[j]);
    sum += term;
  }
  return sum;
}

Matrix1d LagrangeBasis1d::values_at(std::span<const double> points) const {
  Matrix1d m{static_cast<int>(points.size()), size(), {}};
  m.data.resize(m.rows * m.cols);
  for (int q = 0; q < m.rows; ++q)
    for (int i = 0; i < m.cols; ++i) m(q, i) = value(i, points[q]);
  return m;
}

Matrix1d LagrangeBasis1d::derivatives_at(std::span<const double> points) const {
  Matrix1d m{static_cast<int>(points.size()), size(), {}};
  m.data.resize(m.rows * m.cols);
  for (int q = 0; q < m.rows; ++q)
    for (int i = 0; i < m.cols; ++i) m(q, i) = derivative(i, points[q]);
  return m;
}

TensorBasis::TensorBasis(int degree_, int dim_, int n_quad_1d)
    : degree(degree_), dim(dim_), basis(degree_) {
  const auto rule = gauss_legendre(n_quad_1d);
  quad_points = rule.points;
  quad_weights = rule.weights;
  values = basis.values_at(quad_points);
  derivatives = basis.derivatives_at(quad_points);
}

int TensorBasis::n_nodes() const {
  int n = 1;
  for (int d = 0; d < dim; ++d) n *= n_nodes_1d();
  return n;
}

int TensorBasis::n_quad() const {
  int n = 1;
  for (int d = 0; d < dim; ++d) n *= n_quad_1d();
  return n;
}

std::array<double, 3> TensorBasis::node_point(int i) const {
  std::array<double, 3> p{};
  for (int d = 0; d < dim; ++d) {
    p[d] = basis.nodes()[i % n_nodes_1d()];
    i /= n_nodes_1d();
  }
  return p;
}

std::array<double, 3> TensorBasis::quad_point(int q) const {
  std::array<double, 3> p{};
  for (int d = 0; d < dim; ++d) {
    p[d] = quad_points[q % n_quad_1d()];
    q /= n_quad_1d();
  }
  return p;
}

double TensorBasis::quad_weight(int q) const {
  double w = 1.0;
  for (int d = 0; d < dim; ++d) {
    w *= quad_weights[q % n_quad_1d()];
    q /= n_quad_1d();
  }
  return w;
}

void contract_1d(const Matrix1d& m, bool transpose, int dir, const std::array<int, 3>& e,
                 const double* in, double* out, bool accumulate) {
  const int n_in = transpose ? m.rows : m.cols;
  const int n_out = transpose ? m.cols : m.rows;
  int pre = 1;
  for (int d = 0; d < dir; ++d) pre *= e[d];
  int post = 1;
  for (int d = dir + 1; d < 3; ++d) post *= e[d];

  for (int b = 0; b < post; ++b) {
    for (int r = 0; r < n_out; ++r) {
      double* o = out + pre * (r + n_out * b);
      if (!accumulate)
        for (int a = 0; a < pre; ++a) o[a] = 0.0;
      for (int c = 0; c < n_in; ++c) {
        const double coef = transpose ? m.data[c * m.cols + r] : m.data[r * m.cols + c];
        const double* i = in + pre * (c + n_in * b);
        for (int a = 0; a < pre; ++a) o[a] += coef * i[a];
      }
    }
  }
}

void contract_tensor(const std::array<const Matrix1d*, 3>& per_dir, bool transpose, int dim,
                     const double* in, double* out, std::vector<double>& scratch,
                     bool accumulate) {
  std::array<int, 3> e{1, 1, 1};
  std::size_t largest = 1;
  for (int d = 0; d < dim; ++d) {
    const Matrix1d& m = *per_dir[d];
    e[d] = transpose ? m.rows : m.cols;
  }
  {
    // Bound the intermediate sizes by the product of per-direction maxima.
    std::size_t bound = 1;
    for (int d = 0; d < dim; ++d)
      bound *= static_cast<std::size_t>(std::max(per_dir[d]->rows, per_dir[d]->cols));
    largest = bound;
  }
  if (scratch.size() < 2 * largest) scratch.resize(2 * largest);
  double* buf[2] = {scratch.data(), scratch.data() + largest};

  const double* src = in;
  for (int d = 0; d < dim; ++d) {
    const Matrix1d& m = *per_dir[d];
    const bool last = d == dim - 1;
    double* dst = last ? out : buf[d % 2];
    contract_1d(m, transpose, d, e, src, dst, last && accumulate);
    e[d] = transpose ? m.cols : m.rows;
    src = dst;
  }
}

}  // namespace mfstokes
