#pragma once

// Straightforward dense re-implementation of the finite element blocks for
// small meshes. It shares only the quadrature rule with the library; basis
// functions come from a monomial Vandermonde inverse, tangential derivatives
// from the parametric chain rule, and every block is an explicit double
// loop over global indices.

#include <Eigen/Dense>

#include "willmore/mesh.hpp"

namespace oracle {

struct DenseBlocks {
  Eigen::MatrixXd M, A;  // N x N
  Eigen::MatrixXd F1;    // N x N
  Eigen::MatrixXd F2;    // 3N x 3N
  Eigen::VectorXd f2;    // 3N
  Eigen::VectorXd g1;    // N
  Eigen::VectorXd g2;    // 3N
};

/// Lagrange basis of the given degree on the reference triangle,
/// interpolating at `nodes`.
class VandermondeBasis {
 public:
  VandermondeBasis(int degree, const std::vector<willmore::Vec2>& nodes);
  void evaluate(const willmore::Vec2& xi, Eigen::VectorXd& values, Eigen::MatrixXd& gradients) const;

 private:
  int degree_;
  Eigen::MatrixXd coeff_;  // column a: monomial coefficients of phi_a
};

DenseBlocks assemble(const willmore::SurfaceMesh& mesh, const willmore::VectorX& x, const willmore::VectorX& u);

/// Flat linear triangles: M_e = |T|/12 (1 + delta_ab), A_e from cotangents.
void assemble_p1_closed_form(const willmore::SurfaceMesh& mesh, const willmore::VectorX& x, Eigen::MatrixXd& M,
                             Eigen::MatrixXd& A);

}  // namespace oracle
