#pragma once

#include <array>
#include <memory>
#include <vector>

#include "willmore/mesh.hpp"
#include "willmore/sparsity.hpp"

namespace willmore {

/// Unknown vectors u = (H; n) and w = (V; z), each of length 4N, with the
/// component-major layout of types.hpp: H occupies [0, N), n component l
/// occupies [(1 + l) N, (2 + l) N).
inline Eigen::VectorBlock<VectorX> scalar_part(VectorX& v, int n) { return v.segment(0, n); }
inline Eigen::VectorBlock<const VectorX> scalar_part(const VectorX& v, int n) { return v.segment(0, n); }
inline Eigen::VectorBlock<VectorX> vector_part(VectorX& v, int n) { return v.segment(n, 3 * n); }
inline Eigen::VectorBlock<const VectorX> vector_part(const VectorX& v, int n) { return v.segment(n, 3 * n); }

enum class ExecutionPolicy { Serial, Parallel };

struct AssemblyOptions {
  ExecutionPolicy policy = ExecutionPolicy::Serial;
  /// Drop the cubic term Q_h (surface diffusion).
  bool include_Q = true;
};

/// Values of all system blocks on one shared scalar pattern.
///
/// F2 is the 3N x 3N matrix with 3 x 3 blocks F2[l][m] (l, m spatial
/// components); only the six blocks with l <= m are stored because the
/// coefficient H_h A_h - A_h^2 is symmetric.
struct SystemBlocks {
  std::shared_ptr<const MeshPattern> pattern;
  std::vector<double> M, A, F1;
  std::array<std::vector<double>, 6> F2;
  VectorX f2, g1, g2;

  static int f2_block(int l, int m) {
    static constexpr int index[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return index[l][m];
  }

  SparseMatrix mass() const { return pattern->matrix(M); }
  SparseMatrix stiffness() const { return pattern->matrix(A); }
  SparseMatrix F1_matrix() const { return pattern->matrix(F1); }
  /// Materialised 3N x 3N F2.
  SparseMatrix F2_matrix() const;
  /// f = (0; f2), g = (g1; g2) in R^{4N}.
  VectorX f() const;
  VectorX g() const;
};

/// Element-loop driver. Holds the mesh topology, its sparsity pattern, and
/// scratch storage for the element-local blocks used by the parallel path.
///
/// The serial path scatters element blocks in element order. The parallel
/// path computes element blocks concurrently and then gathers every
/// nonzero over its contributing elements in the same ascending order, so
/// both paths give bitwise identical results.
class Assembler {
 public:
  explicit Assembler(const SurfaceMesh& mesh);

  const SurfaceMesh& mesh() const { return mesh_; }
  const std::shared_ptr<const MeshPattern>& pattern() const { return pattern_; }

  /// Only M and A (F, f, g left empty).
  SystemBlocks geometry(const VectorX& x, const AssemblyOptions& options = {}) const;
  /// All blocks at (x, u).
  SystemBlocks system(const VectorX& x, const VectorX& u, const AssemblyOptions& options = {}) const;

 private:
  SystemBlocks run(const VectorX& x, const VectorX* u, const AssemblyOptions& options) const;

  SurfaceMesh mesh_;
  std::shared_ptr<const MeshPattern> pattern_;
};

SparseMatrix assemble_mass(const SurfaceMesh& mesh, const VectorX& x);
SparseMatrix assemble_stiffness(const SurfaceMesh& mesh, const VectorX& x);
/// (F1, F2) with F2 materialised as 3N x 3N.
std::pair<SparseMatrix, SparseMatrix> assemble_F(const SurfaceMesh& mesh, const VectorX& x, const VectorX& u);
VectorX assemble_f2(const SurfaceMesh& mesh, const VectorX& x, const VectorX& u, bool include_Q = true);
std::pair<VectorX, VectorX> assemble_g(const SurfaceMesh& mesh, const VectorX& x, const VectorX& u,
                                       bool include_Q = true);

/// Applies I_d (x) S to a vector of d stacked components.
VectorX apply_block(const SparseMatrix& S, const VectorX& v);

/// W = 1/2 H^T M H.
double willmore_energy(const SparseMatrix& M, const VectorX& H);
/// 1^T M 1.
double surface_area(const SparseMatrix& M);

/// Coefficients of the discrete fields at one quadrature point.
struct PointFields {
  double H = 0.0;
  Vec3 grad_H = Vec3::Zero();
  Vec3 nu = Vec3::Zero();
  Mat3 A = Mat3::Zero();  // symmetric part of grad nu_h
  double absA2 = 0.0;
  double Q = 0.0;
};

/// Evaluates H_h, grad H_h, nu_h, A_h, |A_h|^2 and Q_h from nodal values at
/// quadrature point q of an element whose geometry is `geom`.
PointFields point_fields(const ReferenceElement& ref, const ElementGeometry& geom, int q,
                         const double* H, const Vec3* nu, bool include_Q);

}  // namespace willmore
