#pragma once

#include <memory>
#include <string>

#include "willmore/sparsity.hpp"

namespace willmore {

enum class SolverMethod { Direct, Gmres };

struct LinearSolverSettings {
  SolverMethod method = SolverMethod::Direct;
  /// Required relative residual ||b - S y|| / ||b||.
  double rel_tol = 1e-10;
  int max_iterations = 500;
  int restart = 60;
};

/// Statistics of the last solve.
struct SolveReport {
  double rel_residual = 0.0;
  int iterations = 0;  // Krylov iterations or refinement sweeps
};

/// Solver for the saddle-point systems of the time stepper,
///
///   S = [ c M_d   -(A_d + F) ]
///       [ A_d      M_d       ],   M_d = I_d (x) M,  A_d = I_d (x) A,
///
/// with d = 1 (the (H, V) block) or d = 3 (the (n, z) block). The matrix
/// pattern is fixed for a given mesh, so the direct backend computes the
/// symbolic analysis once and only refactorises numerically afterwards.
///
/// The Krylov backend runs GMRES preconditioned with the block matrix
/// obtained from S by dropping F and adding 2 sqrt(c)^{-1} A_d to the
/// lower-right block (after symmetric scaling). Applying it takes two
/// solves with K_c = sqrt(c) M + A per component, and the preconditioned
/// spectrum lies in [1/2, 1] independently of h and tau when F = 0.
class SaddleSolver {
 public:
  explicit SaddleSolver(LinearSolverSettings settings = {});
  ~SaddleSolver();
  SaddleSolver(SaddleSolver&&) noexcept;
  SaddleSolver& operator=(SaddleSolver&&) noexcept;

  /// `S` is the full system; `M`, `A`, `c` are only used by the Krylov
  /// preconditioner.
  void factorize(const SparseMatrix& S, const SparseMatrix& M, const SparseMatrix& A, double c);
  VectorX solve(const VectorX& b);

  const SolveReport& report() const { return report_; }
  const LinearSolverSettings& settings() const { return settings_; }
  /// Name of the direct backend in use ("umfpack" or "eigen-sparselu").
  static std::string direct_backend();

 private:
  struct Impl;
  LinearSolverSettings settings_;
  std::unique_ptr<Impl> impl_;
  SolveReport report_;
};

}  // namespace willmore
