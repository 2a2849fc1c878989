#include "mfstokes/fespace.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace mfstokes {

namespace {

/// Numbers the tensor-product nodes of a continuous Q_degree space.
///
/// A node is identified by the multilinear weights it carries on the cell
/// vertices: integer numerators prod_d (bit_d ? i_d : degree - i_d). Neighbours
/// see a shared node with the same (vertex, weight) set whatever their
/// relative orientation, which makes the numbering conforming.
struct NodeNumbering {
  int count = 0;
  std::vector<int> cell_nodes;
  std::vector<Point> points;
};

NodeNumbering number_nodes(const LevelMesh& mesh, const TensorBasis& basis) {
  const int dim = mesh.dim;
  const int k = basis.degree;
  const int n1 = basis.n_nodes_1d();
  const int nloc = basis.n_nodes();
  const int nv = mesh.vertices_per_cell();

  NodeNumbering out;
  out.cell_nodes.resize(static_cast<std::size_t>(mesh.n_cells()) * nloc);
  std::map<std::vector<std::pair<int, int>>, int> index;
  std::vector<std::pair<int, int>> key;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int i = 0; i < nloc; ++i) {
      std::array<int, 3> idx{};
      int rem = i;
      for (int d = 0; d < dim; ++d) {
        idx[d] = rem % n1;
        rem /= n1;
      }
      key.clear();
      for (int v = 0; v < nv; ++v) {
        int w = 1;
        for (int d = 0; d < dim; ++d) w *= ((v >> d) & 1) ? idx[d] : k - idx[d];
        if (w != 0) key.emplace_back(mesh.cells[c][v], w);
      }
      std::sort(key.begin(), key.end());
      auto [it, inserted] = index.try_emplace(key, out.count);
      if (inserted) {
        ++out.count;
        out.points.push_back(map_point(mesh, c, basis.node_point(i)).x);
      }
      out.cell_nodes[static_cast<std::size_t>(c) * nloc + i] = it->second;
    }
  }
  return out;
}

}  // namespace

DofMap::DofMap(std::shared_ptr<const LevelMesh> mesh, int degree, std::set<int> dirichlet_ids,
               bool pressure_mean_constrained)
    : mesh_(std::move(mesh)),
      degree_(degree),
      dirichlet_ids_(std::move(dirichlet_ids)),
      mean_constrained_(pressure_mean_constrained) {
  if (degree_ < 2) throw UnsupportedDegree("Taylor-Hood elements need velocity degree >= 2");
  const int dim = mesh_->dim;
  vbasis_ = TensorBasis(degree_, dim, degree_ + 1);
  pbasis_ = TensorBasis(degree_ - 1, dim, degree_ + 1);

  auto vnum = number_nodes(*mesh_, vbasis_);
  auto pnum = number_nodes(*mesh_, pbasis_);
  n_scalar_v_ = vnum.count;
  n_p_ = pnum.count;
  cell_v_ = std::move(vnum.cell_nodes);
  cell_p_ = std::move(pnum.cell_nodes);
  vpoints_ = std::move(vnum.points);
  ppoints_ = std::move(pnum.points);

  constrained_.assign(n_velocity(), 0);
  const int n1 = vbasis_.n_nodes_1d();
  const int nloc = vbasis_.n_nodes();
  for (const auto& bf : mesh_->boundary_faces) {
    if (!dirichlet_ids_.count(bf.boundary_id)) continue;
    const int dir = bf.face / 2;
    const int target = (bf.face % 2) ? degree_ : 0;
    auto nodes = velocity_nodes(bf.cell);
    for (int i = 0; i < nloc; ++i) {
      int rem = i;
      for (int d = 0; d < dir; ++d) rem /= n1;
      if (rem % n1 != target) continue;
      for (int comp = 0; comp < dim; ++comp) constrained_[velocity_dof(comp, nodes[i])] = 1;
    }
  }
  for (int i = 0; i < n_velocity(); ++i)
    if (constrained_[i]) constrained_list_.push_back(i);

  // pressure basis integrals
  pressure_weights_ = Vector::Zero(n_p_);
  const int nq = pbasis_.n_quad();
  const int np = pbasis_.n_nodes();
  for (int c = 0; c < n_cells(); ++c) {
    auto pn = pressure_nodes(c);
    for (int q = 0; q < nq; ++q) {
      const Point xi = pbasis_.quad_point(q);
      const double jxw = map_point(*mesh_, c, xi).det * pbasis_.quad_weight(q);
      for (int i = 0; i < np; ++i) {
        double v = 1.0;
        const Point node = pbasis_.node_point(i);
        for (int d = 0; d < dim; ++d) {
          const int i1 = static_cast<int>(std::lround(node[d] * pbasis_.degree));
          v *= pbasis_.basis.value(i1, xi[d]);
        }
        pressure_weights_[pn[i]] += v * jxw;
      }
    }
  }
}

std::span<const int> DofMap::velocity_nodes(int cell) const {
  const std::size_t n = vbasis_.n_nodes();
  return {cell_v_.data() + cell * n, n};
}

std::span<const int> DofMap::pressure_nodes(int cell) const {
  const std::size_t n = pbasis_.n_nodes();
  return {cell_p_.data() + cell * n, n};
}

void DofMap::zero_constrained(Vector& u) const {
  for (int i : constrained_list_) u[i] = 0.0;
}

void DofMap::check(const BlockVector& x) const {
  if (x.u.size() != n_velocity() || x.p.size() != n_pressure())
    throw DimensionMismatch("block vector does not match the level's dof map");
}

std::shared_ptr<const DofMap> build_dofmap(std::shared_ptr<const LevelMesh> mesh, int degree,
                                           std::set<int> dirichlet_ids,
                                           bool pressure_mean_constrained) {
  return std::make_shared<const DofMap>(std::move(mesh), degree, std::move(dirichlet_ids),
                                        pressure_mean_constrained);
}

BlockVector& apply_dirichlet(const DofMap& dofs, const VectorFunction& boundary_value,
                             BlockVector& x) {
  dofs.check(x);
  const int ns = dofs.n_scalar_velocity();
  for (int dof : dofs.constrained_dofs()) {
    const int comp = dof / ns;
    const int node = dof % ns;
    x.u[dof] = boundary_value(dofs.velocity_node_points()[node])[comp];
  }
  return x;
}

void pressure_mean_project(const DofMap& dofs, Vector& p) {
  const Vector& w = dofs.pressure_weights();
  const double mean = w.dot(p) / w.sum();
  p.array() -= mean;
}

double evaluate_scalar(const DofMap& dofs, bool pressure, int cell, const Point& reference,
                       const Vector& coefficients, int component) {
  const TensorBasis& basis = pressure ? dofs.pressure_basis() : dofs.velocity_basis();
  auto nodes = pressure ? dofs.pressure_nodes(cell) : dofs.velocity_nodes(cell);
  const int offset = pressure ? 0 : component * dofs.n_scalar_velocity();
  const int n1 = basis.n_nodes_1d();
  double value = 0.0;
  for (int i = 0; i < basis.n_nodes(); ++i) {
    double phi = 1.0;
    int rem = i;
    for (int d = 0; d < dofs.dim(); ++d) {
      phi *= basis.basis.value(rem % n1, reference[d]);
      rem /= n1;
    }
    value += phi * coefficients[offset + nodes[i]];
  }
  return value;
}

}  // namespace mfstokes
