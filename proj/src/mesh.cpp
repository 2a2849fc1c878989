#include "mfstokes/mesh.hpp"

#include "channel_mesh_data.hpp"
#include "mfstokes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace mfstokes {

bool GeometryDescriptor::attached_to(int boundary_id) const {
  return kind != GeometryKind::none &&
         std::find(boundary_ids.begin(), boundary_ids.end(), boundary_id) != boundary_ids.end();
}

Point GeometryDescriptor::project(const Point& x) const {
  if (kind == GeometryKind::none) return x;
  const double dx = x[0] - center[0];
  const double dy = x[1] - center[1];
  const double dist = std::hypot(dx, dy);
  if (dist == 0.0) throw InvalidGeometry("cannot project the curve centre onto the curve");
  Point y = x;
  y[0] = center[0] + radius * dx / dist;
  y[1] = center[1] + radius * dy / dist;
  if (kind == GeometryKind::circle) y[2] = 0.0;
  return y;
}

double LevelMesh::max_cell_diameter() const {
  double h = 0.0;
  const int nv = vertices_per_cell();
  for (const auto& cell : cells) {
    for (int a = 0; a < nv; ++a) {
      for (int b = a + 1; b < nv; ++b) {
        const Point& p = vertices[cell[a]];
        const Point& q = vertices[cell[b]];
        h = std::max(h, std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) +
                                  (p[2] - q[2]) * (p[2] - q[2])));
      }
    }
  }
  return h;
}

namespace {

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<Point> jacobian_check_points(int dim) {
  // Cell corners plus the 3-point Gauss grid.
  const auto gauss = gauss_legendre(3);
  std::vector<Point> pts;
  const int nc = 1 << dim;
  for (int v = 0; v < nc; ++v) {
    Point p{};
    for (int d = 0; d < dim; ++d) p[d] = (v >> d) & 1;
    pts.push_back(p);
  }
  const int ng = ipow(3, dim);
  for (int q = 0; q < ng; ++q) {
    Point p{};
    int rem = q;
    for (int d = 0; d < dim; ++d) {
      p[d] = gauss.points[rem % 3];
      rem /= 3;
    }
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

MappedPoint map_point(const LevelMesh& mesh, int cell, const Point& ref) {
  const int dim = mesh.dim;
  const int nv = mesh.vertices_per_cell();
  MappedPoint mp;
  for (int v = 0; v < nv; ++v) {
    const Point& X = mesh.vertices[mesh.cells[cell][v]];
    double shape = 1.0;
    std::array<double, 3> grad{1.0, 1.0, 1.0};
    for (int d = 0; d < dim; ++d) {
      const bool bit = (v >> d) & 1;
      const double f = bit ? ref[d] : 1.0 - ref[d];
      const double df = bit ? 1.0 : -1.0;
      shape *= f;
      for (int b = 0; b < dim; ++b) grad[b] *= (b == d) ? df : f;
    }
    for (int a = 0; a < dim; ++a) {
      mp.x[a] += shape * X[a];
      for (int b = 0; b < dim; ++b) mp.jacobian[a * 3 + b] += grad[b] * X[a];
    }
  }
  const auto& J = mp.jacobian;
  auto& T = mp.inverse_transpose;
  if (dim == 2) {
    mp.det = J[0] * J[4] - J[1] * J[3];
    if (mp.det > 0.0) {
      // inverse J^{-1} = [J11 -J01; -J10 J00] / det, stored transposed.
      T[0 * 3 + 0] = J[4] / mp.det;
      T[0 * 3 + 1] = -J[3] / mp.det;
      T[1 * 3 + 0] = -J[1] / mp.det;
      T[1 * 3 + 1] = J[0] / mp.det;
    }
  } else {
    auto j = [&](int a, int b) { return J[a * 3 + b]; };
    // cofactor matrix C, J^{-T} = C / det
    std::array<double, 9> C{};
    C[0] = j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1);
    C[1] = j(1, 2) * j(2, 0) - j(1, 0) * j(2, 2);
    C[2] = j(1, 0) * j(2, 1) - j(1, 1) * j(2, 0);
    C[3] = j(0, 2) * j(2, 1) - j(0, 1) * j(2, 2);
    C[4] = j(0, 0) * j(2, 2) - j(0, 2) * j(2, 0);
    C[5] = j(0, 1) * j(2, 0) - j(0, 0) * j(2, 1);
    C[6] = j(0, 1) * j(1, 2) - j(0, 2) * j(1, 1);
    C[7] = j(0, 2) * j(1, 0) - j(0, 0) * j(1, 2);
    C[8] = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
    mp.det = j(0, 0) * C[0] + j(0, 1) * C[1] + j(0, 2) * C[2];
    if (mp.det > 0.0)
      for (int i = 0; i < 9; ++i) T[i] = C[i] / mp.det;
  }
  if (!(mp.det > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive Jacobian determinant " << mp.det << " in cell " << cell << " on level "
        << mesh.level;
    throw InvalidGeometry(msg.str());
  }
  return mp;
}

std::vector<MappedPoint> cell_mapping(const LevelMesh& mesh, int cell,
                                      std::span<const Point> reference_points) {
  std::vector<MappedPoint> out;
  out.reserve(reference_points.size());
  for (const auto& r : reference_points) out.push_back(map_point(mesh, cell, r));
  return out;
}

void check_jacobians(const LevelMesh& mesh, std::span<const Point> reference_points) {
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (const auto& r : reference_points) map_point(mesh, c, r);
}

LevelMesh refine_uniform(const LevelMesh& mesh, std::span<const GeometryDescriptor> geometry) {
  const int dim = mesh.dim;
  const int nv = mesh.vertices_per_cell();
  const int ngrid = ipow(3, dim);

  LevelMesh fine;
  fine.level = mesh.level + 1;
  fine.dim = dim;
  fine.vertices = mesh.vertices;
  fine.cells.reserve(mesh.cells.size() * nv);
  fine.parent_of.reserve(mesh.cells.size() * nv);

  std::map<std::vector<int>, int> created;
  std::vector<char> snapped(mesh.vertices.size(), 0);

  // Boundary faces per cell, for snapping.
  std::vector<std::vector<BoundaryFace>> faces_of(mesh.cells.size());
  for (const auto& bf : mesh.boundary_faces) faces_of[bf.cell].push_back(bf);

  std::vector<int> grid(ngrid);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int g = 0; g < ngrid; ++g) {
      std::array<int, 3> a{};
      int rem = g;
      for (int d = 0; d < dim; ++d) {
        a[d] = rem % 3;
        rem /= 3;
      }
      std::vector<int> key;
      for (int v = 0; v < nv; ++v) {
        bool ok = true;
        for (int d = 0; d < dim; ++d) {
          const int bit = (v >> d) & 1;
          if ((a[d] == 0 && bit == 1) || (a[d] == 2 && bit == 0)) ok = false;
        }
        if (ok) key.push_back(cell[v]);
      }
      std::sort(key.begin(), key.end());
      if (key.size() == 1) {
        grid[g] = key.front();
        continue;
      }
      auto [it, inserted] = created.try_emplace(key, static_cast<int>(fine.vertices.size()));
      if (inserted) {
        Point x{};
        for (int v : key)
          for (int d = 0; d < 3; ++d) x[d] += mesh.vertices[v][d];
        for (int d = 0; d < 3; ++d) x[d] /= static_cast<double>(key.size());
        fine.vertices.push_back(x);
        snapped.push_back(0);
      }
      grid[g] = it->second;

      for (const auto& bf : faces_of[c]) {
        const int dir = bf.face / 2;
        const int side = bf.face % 2;
        if (a[dir] != 2 * side || snapped[grid[g]]) continue;
        for (const auto& geo : geometry) {
          if (geo.attached_to(bf.boundary_id)) {
            fine.vertices[grid[g]] = geo.project(fine.vertices[grid[g]]);
            snapped[grid[g]] = 1;
            break;
          }
        }
      }
    }

    for (int child = 0; child < nv; ++child) {
      std::array<int, 8> verts{};
      for (int v = 0; v < nv; ++v) {
        int g = 0;
        int stride = 1;
        for (int d = 0; d < dim; ++d) {
          g += (((child >> d) & 1) + ((v >> d) & 1)) * stride;
          stride *= 3;
        }
        verts[v] = grid[g];
      }
      fine.cells.push_back(verts);
      fine.parent_of.push_back(c);
    }
  }

  for (const auto& bf : mesh.boundary_faces) {
    const int dir = bf.face / 2;
    const int side = bf.face % 2;
    for (int child = 0; child < nv; ++child)
      if (((child >> dir) & 1) == side)
        fine.boundary_faces.push_back({bf.cell * nv + child, bf.face, bf.boundary_id});
  }

  const auto pts = jacobian_check_points(dim);
  check_jacobians(fine, pts);
  return fine;
}

void refine_hierarchy(std::vector<LevelMesh>& hierarchy,
                      std::span<const GeometryDescriptor> geometry) {
  LevelMesh fine = refine_uniform(hierarchy.back(), geometry);
  LevelMesh& coarse = hierarchy.back();
  const int nv = coarse.vertices_per_cell();
  coarse.children_of.assign(coarse.cells.size(), {});
  for (int c = 0; c < coarse.n_cells(); ++c)
    for (int child = 0; child < nv; ++child) coarse.children_of[c][child] = c * nv + child;
  hierarchy.push_back(std::move(fine));
}

std::vector<LevelMesh> make_unit_hypercube(int dim, int initial_refinements) {
  if (dim != 2 && dim != 3) throw Error("dimension must be 2 or 3");
  if (initial_refinements < 0) throw Error("refinement count must be non-negative");
  LevelMesh coarse;
  coarse.dim = dim;
  const int nv = 1 << dim;
  std::array<int, 8> cell{};
  for (int v = 0; v < nv; ++v) {
    Point p{};
    for (int d = 0; d < dim; ++d) p[d] = (v >> d) & 1;
    coarse.vertices.push_back(p);
    cell[v] = v;
  }
  coarse.cells.push_back(cell);
  for (int f = 0; f < 2 * dim; ++f) coarse.boundary_faces.push_back({0, f, f});

  std::vector<LevelMesh> hierarchy{std::move(coarse)};
  for (int r = 0; r < initial_refinements; ++r) refine_hierarchy(hierarchy);
  return hierarchy;
}

LevelMesh make_channel_with_cylinder() {
  std::istringstream in(detail::kChannelMeshData);
  LevelMesh mesh = read_mesh(in);
  check_jacobians(mesh, jacobian_check_points(mesh.dim));
  return mesh;
}

GeometryDescriptor channel_cylinder_geometry() {
  GeometryDescriptor geo;
  geo.kind = GeometryKind::circle;
  geo.center = {0.2, 0.2, 0.0};
  geo.radius = 0.05;
  geo.boundary_ids = {3};
  return geo;
}

namespace {

std::string next_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (!tok.empty() && tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    return tok;
  }
  throw ParseError("unexpected end of mesh file");
}

template <typename T>
T next_value(std::istream& in) {
  const std::string tok = next_token(in);
  std::istringstream ss(tok);
  T value{};
  ss >> value;
  if (ss.fail() || !ss.eof()) throw ParseError("malformed mesh token '" + tok + "'");
  return value;
}

void expect(std::istream& in, const std::string& keyword) {
  const std::string tok = next_token(in);
  if (tok != keyword) throw ParseError("expected '" + keyword + "', found '" + tok + "'");
}

}  // namespace

LevelMesh read_mesh(std::istream& in) {
  LevelMesh mesh;
  expect(in, "dim");
  mesh.dim = next_value<int>(in);
  if (mesh.dim != 2 && mesh.dim != 3) throw ParseError("dimension must be 2 or 3");

  expect(in, "vertices");
  const int nvert = next_value<int>(in);
  mesh.vertices.resize(nvert);
  for (auto& v : mesh.vertices)
    for (int d = 0; d < mesh.dim; ++d) v[d] = next_value<double>(in);

  expect(in, "cells");
  const int ncell = next_value<int>(in);
  mesh.cells.resize(ncell);
  for (auto& c : mesh.cells) {
    for (int v = 0; v < mesh.vertices_per_cell(); ++v) {
      c[v] = next_value<int>(in);
      if (c[v] < 0 || c[v] >= nvert) throw ParseError("cell references unknown vertex");
    }
  }

  expect(in, "boundary");
  const int nface = next_value<int>(in);
  mesh.boundary_faces.resize(nface);
  for (auto& f : mesh.boundary_faces) {
    f.cell = next_value<int>(in);
    f.face = next_value<int>(in);
    f.boundary_id = next_value<int>(in);
    if (f.cell < 0 || f.cell >= ncell || f.face < 0 || f.face >= 2 * mesh.dim)
      throw ParseError("invalid boundary face entry");
  }
  return mesh;
}

void write_mesh(std::ostream& out, const LevelMesh& mesh) {
  const auto old_precision = out.precision(17);
  out << "dim " << mesh.dim << '\n' << "vertices " << mesh.vertices.size() << '\n';
  for (const auto& v : mesh.vertices) {
    for (int d = 0; d < mesh.dim; ++d) out << (d ? " " : "") << v[d];
    out << '\n';
  }
  out << "cells " << mesh.cells.size() << '\n';
  for (const auto& c : mesh.cells) {
    for (int v = 0; v < mesh.vertices_per_cell(); ++v) out << (v ? " " : "") << c[v];
    out << '\n';
  }
  out << "boundary " << mesh.boundary_faces.size() << '\n';
  for (const auto& f : mesh.boundary_faces)
    out << f.cell << ' ' << f.face << ' ' << f.boundary_id << '\n';
  out.precision(old_precision);
}

}  // namespace mfstokes
