#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "willmore/mesh.hpp"

namespace willmore {

/// Reads an ASCII OFF triangle mesh as a linear SurfaceMesh. The mesh must be
/// closed and consistently oriented.
SurfaceMesh read_off(std::istream& in);
SurfaceMesh read_off_file(const std::string& path);

/// Writes the corner triangulation (vertices and corner triangles) as OFF.
/// Coordinates use the shortest round-trip decimal representation.
void write_off(std::ostream& out, const SurfaceMesh& mesh);
void write_off(std::ostream& out, const SurfaceMesh& mesh, const VectorX& x);
void write_off_file(const std::string& path, const SurfaceMesh& mesh);

struct VtkOptions {
  /// Emit VTK_QUADRATIC_TRIANGLE cells for k = 2; otherwise every element is
  /// split into k^2 linear triangles.
  bool quadratic_cells = true;
  std::string title = "willmore surface";
};

using NamedField = std::pair<std::string, VectorX>;

/// Legacy ASCII VTK unstructured grid with scalar point data. Each field
/// holds one value per node.
void write_vtk(std::ostream& out, const SurfaceMesh& mesh, const VectorX& x,
               const std::vector<NamedField>& point_scalars, const VtkOptions& options = {});
void write_vtk_file(const std::string& path, const SurfaceMesh& mesh, const VectorX& x,
                    const std::vector<NamedField>& point_scalars, const VtkOptions& options = {});

}  // namespace willmore
