#pragma once

#include "mfstokes/fespace.hpp"

#include <iosfwd>
#include <string>

namespace mfstokes {

/// Legacy ASCII VTK unstructured grid. Points are the velocity nodes, every
/// mesh cell is split into degree^d linear sub-cells, and the point data are
/// the velocity vector and the pressure interpolated to the velocity nodes.
void write_fields(std::ostream& out, const DofMap& dofs, const BlockVector& solution);
void write_fields(const std::string& path, const DofMap& dofs, const BlockVector& solution);

}  // namespace mfstokes
