#pragma once

#include <array>
#include <vector>

#include "willmore/types.hpp"

namespace willmore {

/// Quadrature rule on the reference triangle {(xi, eta): xi, eta >= 0, xi + eta <= 1}.
struct QuadratureRule {
  int order = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to 1/2
};

/// Rule exact for polynomials of total degree <= order.
QuadratureRule triangle_quadrature(int order);

/// Lagrange element of degree k on the reference triangle.
///
/// Local node layout: the three vertices (0,0), (1,0), (0,1); then k-1 nodes
/// on each edge, traversed 0->1, 1->2, 2->0; then interior nodes in
/// lexicographic order of their lattice index. For k = 2 this coincides with
/// the VTK quadratic triangle.
class ReferenceElement {
 public:
  ReferenceElement(int degree, int quad_order);

  int degree() const { return degree_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  /// Lattice indices (i, j) with node = (i/k, j/k).
  const std::vector<std::array<int, 2>>& lattice() const { return lattice_; }

  const QuadratureRule& quadrature() const { return quad_; }
  int quad_size() const { return static_cast<int>(quad_.points.size()); }

  /// Basis values and reference gradients at arbitrary reference points.
  void evaluate(const Vec2& xi, double* values, Vec2* gradients) const;

  /// Tabulated at the quadrature points: value(q, a), gradient(q, a).
  double value(int q, int a) const { return values_[q * node_count() + a]; }
  const Vec2& gradient(int q, int a) const { return gradients_[q * node_count() + a]; }

 private:
  int degree_;
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 2>> lattice_;
  QuadratureRule quad_;
  std::vector<double> values_;
  std::vector<Vec2> gradients_;
};

ReferenceElement build_reference(int degree, int quad_order);

}  // namespace willmore
