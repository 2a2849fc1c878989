#include "mfstokes/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <vector>

namespace mfstokes {

void write_fields(std::ostream& out, const DofMap& dofs, const BlockVector& x) {
  dofs.check(x);
  const int dim = dofs.dim();
  const int k = dofs.degree();
  const int n1 = k + 1;
  const int ns = dofs.n_scalar_velocity();
  const auto& points = dofs.velocity_node_points();

  std::vector<double> pressure(ns, 0.0);
  std::vector<char> seen(ns, 0);
  const auto& vb = dofs.velocity_basis();
  for (int c = 0; c < dofs.n_cells(); ++c) {
    const auto vn = dofs.velocity_nodes(c);
    for (int i = 0; i < vb.n_nodes(); ++i) {
      if (seen[vn[i]]) continue;
      seen[vn[i]] = 1;
      pressure[vn[i]] = evaluate_scalar(dofs, true, c, vb.node_point(i), x.p);
    }
  }

  const int sub_per_cell = dim == 2 ? k * k : k * k * k;
  const int corners = 1 << dim;
  const int n_sub = dofs.n_cells() * sub_per_cell;

  out << "# vtk DataFile Version 3.0\nmfstokes solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(12);
  out << "POINTS " << ns << " double\n";
  for (const auto& p : points) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';

  out << "CELLS " << n_sub << ' ' << n_sub * (corners + 1) << '\n';
  // VTK corner order: counter-clockwise bottom face, then the top face
  static constexpr int order[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                      {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  for (int c = 0; c < dofs.n_cells(); ++c) {
    const auto vn = dofs.velocity_nodes(c);
    for (int s = 0; s < sub_per_cell; ++s) {
      const int a = s % k;
      const int b = (s / k) % k;
      const int z = dim == 3 ? s / (k * k) : 0;
      out << corners;
      for (int v = 0; v < corners; ++v) {
        int local = (a + order[v][0]) + n1 * (b + order[v][1]);
        if (dim == 3) local += n1 * n1 * (z + order[v][2]);
        out << ' ' << vn[local];
      }
      out << '\n';
    }
  }
  out << "CELL_TYPES " << n_sub << '\n';
  for (int s = 0; s < n_sub; ++s) out << (dim == 2 ? 9 : 12) << '\n';

  out << "POINT_DATA " << ns << "\nVECTORS velocity double\n";
  for (int i = 0; i < ns; ++i) {
    for (int c = 0; c < 3; ++c) out << (c ? " " : "") << (c < dim ? x.u[c * ns + i] : 0.0);
    out << '\n';
  }
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < ns; ++i) out << pressure[i] << '\n';
}

void write_fields(const std::string& path, const DofMap& dofs, const BlockVector& solution) {
  std::ofstream file(path);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  write_fields(file, dofs, solution);
  if (!file) throw Error("failed writing '" + path + "'");
}

}  // namespace mfstokes
