#pragma once

#include <Eigen/SparseCholesky>
#include <memory>

#include "willmore/sparsity.hpp"

namespace willmore {

struct NormTriple {
  double m = 0.0;  // sqrt(v^T M v)
  double a = 0.0;  // sqrt(v^T A v)
  double k = 0.0;  // sqrt(v^T (M + A) v)
};

/// Discrete L2, H1-seminorm and H1 norms of a vector made of d stacked
/// nodal components (length d N), applying I_d (x) M implicitly.
NormTriple norms(const SparseMatrix& M, const SparseMatrix& A, const VectorX& v);

/// Factorisation of K = M + A for discrete dual norms
///   ||d||_* = sqrt(d^T M K^{-1} M d).
class DualNorm {
 public:
  DualNorm(const SparseMatrix& M, const SparseMatrix& A);

  /// Dual norm of a nodal vector d (d stacked components).
  double operator()(const VectorX& d) const;
  /// Dual norm of the vector whose M-image is r, i.e. sqrt(r^T K^{-1} r).
  double of_residual(const VectorX& r) const;
  /// sqrt(r^T M^{-1} r) = ||M^{-1} r||_M.
  double m_norm_of_residual(const VectorX& r) const;

 private:
  SparseMatrix M_;
  Eigen::SimplicialLDLT<SparseMatrix> K_;
  Eigen::SimplicialLDLT<SparseMatrix> Mfac_;
};

double dual_norm(const SparseMatrix& M, const SparseMatrix& A, const VectorX& d);

}  // namespace willmore
