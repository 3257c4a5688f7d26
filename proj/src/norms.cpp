#include "willmore/norms.hpp"

#include <cmath>

#include "willmore/assembly.hpp"

namespace willmore {

namespace {

// Clamp tiny negative round-off of a quadratic form.
double root(double q) { return std::sqrt(std::max(q, 0.0)); }

template <class Solver>
VectorX solve_blocks(const Solver& solver, const VectorX& r, Eigen::Index n) {
  VectorX y(r.size());
  for (Eigen::Index c = 0; c < r.size() / n; ++c) y.segment(c * n, n) = solver.solve(r.segment(c * n, n));
  return y;
}

}  // namespace

NormTriple norms(const SparseMatrix& M, const SparseMatrix& A, const VectorX& v) {
  NormTriple t;
  const double m2 = v.dot(apply_block(M, v));
  const double a2 = v.dot(apply_block(A, v));
  t.m = root(m2);
  t.a = root(a2);
  t.k = root(m2 + a2);
  return t;
}

DualNorm::DualNorm(const SparseMatrix& M, const SparseMatrix& A) : M_(M) {
  const SparseMatrix K = M + A;
  K_.compute(K);
  if (K_.info() != Eigen::Success) throw SolverError("dual norm: factorisation of K = M + A failed");
  Mfac_.compute(M);
  if (Mfac_.info() != Eigen::Success) throw SolverError("dual norm: factorisation of M failed");
}

double DualNorm::of_residual(const VectorX& r) const {
  const Eigen::Index n = M_.rows();
  if (r.size() % n != 0) throw Error("dual norm: vector length is not a multiple of N");
  return root(r.dot(solve_blocks(K_, r, n)));
}

double DualNorm::operator()(const VectorX& d) const { return of_residual(apply_block(M_, d)); }

double DualNorm::m_norm_of_residual(const VectorX& r) const {
  const Eigen::Index n = M_.rows();
  if (r.size() % n != 0) throw Error("dual norm: vector length is not a multiple of N");
  return root(r.dot(solve_blocks(Mfac_, r, n)));
}

double dual_norm(const SparseMatrix& M, const SparseMatrix& A, const VectorX& d) {
  return DualNorm(M, A)(d);
}

}  // namespace willmore
