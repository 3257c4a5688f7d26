#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "willmore/reference_element.hpp"
#include "willmore/types.hpp"

namespace willmore {

class AnalyticSurface;

/// Closed, oriented triangulation with degree-k isoparametric elements.
///
/// Nodes 0..vertex_count()-1 are the triangle corners; higher-order nodes
/// follow. Element connectivity uses the local layout of ReferenceElement.
class SurfaceMesh {
 public:
  SurfaceMesh(int degree, int n_nodes, int n_vertices, std::vector<int> connectivity,
              VectorX positions, int quad_order = 0);

  int degree() const { return ref_->degree(); }
  int node_count() const { return n_nodes_; }
  int vertex_count() const { return n_vertices_; }
  int element_count() const { return static_cast<int>(connectivity_.size()) / nodes_per_element(); }
  int nodes_per_element() const { return ref_->node_count(); }

  std::span<const int> element(int e) const {
    return {connectivity_.data() + static_cast<std::size_t>(e) * nodes_per_element(),
            static_cast<std::size_t>(nodes_per_element())};
  }
  std::array<int, 3> corners(int e) const {
    const auto el = element(e);
    return {el[0], el[1], el[2]};
  }
  const std::vector<int>& connectivity() const { return connectivity_; }

  /// Initial nodal positions x in R^{3N}, component-major.
  const VectorX& positions() const { return x_; }
  Vec3 node(int j) const { return node_vec3(x_, n_nodes_, j); }

  const ReferenceElement& reference() const { return *ref_; }
  std::shared_ptr<const ReferenceElement> reference_ptr() const { return ref_; }

  /// Same topology, new nodal positions.
  SurfaceMesh with_positions(VectorX positions) const;
  /// Applies a relabelling new_index = perm[old_index] to the nodes; corner
  /// nodes must map to corner nodes.
  SurfaceMesh permuted(const std::vector<int>& perm) const;

 private:
  int n_nodes_;
  int n_vertices_;
  std::vector<int> connectivity_;
  VectorX x_;
  std::shared_ptr<const ReferenceElement> ref_;
};

/// Per-quadrature-point geometry of one curved element.
struct ElementGeometry {
  int quad_count = 0;
  int node_count = 0;
  std::vector<Vec3> position;   // [q]
  std::vector<double> weight;   // [q] quadrature weight * sqrt(det(J^T J))
  std::vector<double> metric_det;  // [q] det(J^T J)
  std::vector<Vec3> gradient;   // [q * node_count + a] tangential gradient of phi_a

  const Vec3& grad(int q, int a) const { return gradient[q * node_count + a]; }
  double measure() const;
};

/// Tangential gradients are J (J^T J)^{-1} grad_ref, the measure is
/// sqrt(det(J^T J)). Throws DegenerateElementError when det <= 0.
void compute_element_geometry(const SurfaceMesh& mesh, const VectorX& x, int element,
                              ElementGeometry& out);
ElementGeometry element_geometry(const SurfaceMesh& mesh, const VectorX& x, int element);

/// Throws MeshError unless every corner edge is shared by exactly two
/// elements, traversed in opposite directions.
void check_closed_oriented(const SurfaceMesh& mesh);

/// Maximum corner-to-corner distance over all elements.
double mesh_width(const SurfaceMesh& mesh, const VectorX& x);
double mesh_width(const SurfaceMesh& mesh);

/// Minimum of det(J^T J) over all quadrature points of each element.
std::vector<double> min_metric_determinants(const SurfaceMesh& mesh, const VectorX& x);

/// Places a high-order node inside the triangle with the given corner ids at
/// barycentric coordinates (weights of corners 0, 1, 2).
using NodePlacer = std::function<Vec3(const std::array<int, 3>& corners, const Vec3& barycentric)>;

/// Builds a degree-k mesh on top of a corner triangulation. Edge nodes are
/// created once per edge, in the direction of increasing corner index.
SurfaceMesh elevate_degree(const std::vector<Vec3>& vertices,
                           const std::vector<std::array<int, 3>>& triangles, int degree,
                           const NodePlacer& place, int quad_order = 0);

/// Degree-k mesh interpolating `surface`: new nodes are the projections of
/// the corresponding points of the flat triangles.
SurfaceMesh curve_mesh(const SurfaceMesh& linear_mesh, const AnalyticSurface& surface,
                       int degree = 2);

/// Corner triangles of a mesh.
std::vector<std::array<int, 3>> corner_triangles(const SurfaceMesh& mesh);
std::vector<Vec3> vertex_positions(const SurfaceMesh& mesh);

}  // namespace willmore
