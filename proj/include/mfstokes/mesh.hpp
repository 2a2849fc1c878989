#pragma once

#include "mfstokes/types.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace mfstokes {

// Reference orientation conventions used throughout the library:
//  * cell vertex i sits at reference coordinate (i & 1, (i >> 1) & 1, (i >> 2) & 1)
//  * local face f = 2 * direction + side is the facet where xi_direction == side
//  * child c of a refined cell occupies the sub-box with lower corner
//    ((c & 1) / 2, ((c >> 1) & 1) / 2, ((c >> 2) & 1) / 2)

struct BoundaryFace {
  int cell = 0;
  int face = 0;
  int boundary_id = 0;
};

enum class GeometryKind { none, circle, cylinder };

/// Exact curved boundary that refinement snaps new boundary vertices onto.
/// A cylinder is the 3d extrusion of a circle along the z axis.
struct GeometryDescriptor {
  GeometryKind kind = GeometryKind::none;
  Point center{};
  double radius = 0.0;
  std::vector<int> boundary_ids;

  bool attached_to(int boundary_id) const;
  /// Radial projection onto the curve; identity for kind none.
  Point project(const Point& x) const;
};

/// One level of a nested quad/hex hierarchy.
struct LevelMesh {
  int level = 0;
  int dim = 2;
  std::vector<Point> vertices;
  std::vector<std::array<int, 8>> cells;
  std::vector<BoundaryFace> boundary_faces;
  /// Parent cell on level - 1, empty on a coarsest level.
  std::vector<int> parent_of;
  /// 2^dim children per cell on level + 1, empty on the finest level.
  std::vector<std::array<int, 8>> children_of;

  int vertices_per_cell() const { return 1 << dim; }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  /// Largest vertex-to-vertex distance over all cells.
  double max_cell_diameter() const;
};

struct MappedPoint {
  Point x{};
  /// jacobian[a * 3 + b] = d x_a / d xi_b
  std::array<double, 9> jacobian{};
  double det = 0.0;
  /// inverse_transpose[a * 3 + b] = d xi_b / d x_a
  std::array<double, 9> inverse_transpose{};
};

/// Levels 0..initial_refinements of the uniformly refined unit square/cube.
/// Boundary id of the facet x_d = s is 2 d + s.
std::vector<LevelMesh> make_unit_hypercube(int dim, int initial_refinements);

/// Coarse level of the channel (0, 2.2) x (0, 0.41) around the disk of
/// radius 0.05 at (0.2, 0.2). Boundary ids: 0 inflow, 1 outflow, 2 walls,
/// 3 cylinder.
LevelMesh make_channel_with_cylinder();
GeometryDescriptor channel_cylinder_geometry();

/// Splits every cell into 2^dim children. New vertices on boundary faces
/// attached to a descriptor are snapped to the curve, all others are the
/// mean of their generating vertices.
LevelMesh refine_uniform(const LevelMesh& mesh, std::span<const GeometryDescriptor> geometry = {});

/// Refines hierarchy.back() and records the parent/child links.
void refine_hierarchy(std::vector<LevelMesh>& hierarchy,
                      std::span<const GeometryDescriptor> geometry = {});

MappedPoint map_point(const LevelMesh& mesh, int cell, const Point& reference);
std::vector<MappedPoint> cell_mapping(const LevelMesh& mesh, int cell,
                                      std::span<const Point> reference_points);

/// Throws InvalidGeometry if some cell has det J <= 0 at one of the points.
void check_jacobians(const LevelMesh& mesh, std::span<const Point> reference_points);

LevelMesh read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const LevelMesh& mesh);

}  // namespace mfstokes
