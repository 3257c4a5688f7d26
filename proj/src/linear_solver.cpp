#include "willmore/linear_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <memory>
#include <unsupported/Eigen/IterativeSolvers>

#ifdef WILLMORE_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace willmore {

namespace {

#ifdef WILLMORE_HAVE_UMFPACK
using DirectLU = Eigen::UmfPackLU<SparseMatrix>;
#else
using DirectLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;
#endif

// Preconditioner for S = [cM -(A+F); A M] (see header), exposing the
// interface Eigen's iterative solvers expect. compute() is a no-op because
// the factors are refreshed explicitly through update().
//
// With a = sqrt(c), the scalings n' = a n and (row 2) * a turn S without F
// into [aM -A; A aM], which is preconditioned by
//   P = [aM  -A; A  aM + 2A].
// P^{-1}(f, g) needs two solves with K = aM + A:
//   h = K^{-1}(f + g),  y = K^{-1}(aM h - f),  x = h - y.
class SaddlePreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  struct Factors {
    SparseMatrix M;
    Eigen::SimplicialLDLT<SparseMatrix> K;
    bool analyzed = false;
    int n = 0, d = 1;
    double a = 1.0;

    void update(const SparseMatrix& mass, const SparseMatrix& stiffness, double c, int blocks) {
      M = mass;
      a = std::sqrt(c);
      n = static_cast<int>(mass.rows());
      d = blocks;
      const SparseMatrix Kc = a * mass + stiffness;
      if (!analyzed) {
        K.analyzePattern(Kc);
        analyzed = true;
      }
      K.factorize(Kc);
      if (K.info() != Eigen::Success) throw SolverError("preconditioner factorisation failed");
    }
  };

  SaddlePreconditioner() = default;
  explicit SaddlePreconditioner(std::shared_ptr<const Factors> f) : f_(std::move(f)) {}

  template <typename MatType>
  SaddlePreconditioner& analyzePattern(const MatType&) { return *this; }
  template <typename MatType>
  SaddlePreconditioner& factorize(const MatType&) { return *this; }
  template <typename MatType>
  SaddlePreconditioner& compute(const MatType&) { return *this; }

  VectorX solve(const VectorX& b) const {
    const int n = f_->n, d = f_->d;
    const double a = f_->a;
    VectorX y(b.size());
    for (int comp = 0; comp < d; ++comp) {
      const auto f = b.segment(comp * n, n);
      const VectorX g = a * b.segment((d + comp) * n, n);
      const VectorX h = f_->K.solve(f + g);
      const VectorX z = f_->K.solve(a * (f_->M * h) - f);
      y.segment(comp * n, n) = (h - z) / a;
      y.segment((d + comp) * n, n) = z;
    }
    return y;
  }

  Eigen::ComputationInfo info() const { return Eigen::Success; }

 private:
  std::shared_ptr<const Factors> f_;
};

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

struct SaddleSolver::Impl {
  SparseMatrix S;
  DirectLU lu;
  bool analyzed = false;
  Eigen::Index analyzed_nnz = -1;
  std::shared_ptr<SaddlePreconditioner::Factors> factors = std::make_shared<SaddlePreconditioner::Factors>();
};

SaddleSolver::SaddleSolver(LinearSolverSettings settings)
    : settings_(settings), impl_(std::make_unique<Impl>()) {}
SaddleSolver::~SaddleSolver() = default;
SaddleSolver::SaddleSolver(SaddleSolver&&) noexcept = default;
SaddleSolver& SaddleSolver::operator=(SaddleSolver&&) noexcept = default;

std::string SaddleSolver::direct_backend() {
#ifdef WILLMORE_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

void SaddleSolver::factorize(const SparseMatrix& S, const SparseMatrix& M, const SparseMatrix& A, double c) {
  impl_->S = S;
  if (settings_.method == SolverMethod::Direct) {
    if (!impl_->analyzed || impl_->analyzed_nnz != S.nonZeros()) {
      impl_->lu.analyzePattern(impl_->S);
      impl_->analyzed = true;
      impl_->analyzed_nnz = S.nonZeros();
    }
    impl_->lu.factorize(impl_->S);
    if (impl_->lu.info() != Eigen::Success) throw SolverError("sparse LU factorisation failed");
  } else {
    const int d = static_cast<int>(S.rows() / (2 * M.rows()));
    impl_->factors->update(M, A, c, d);
  }
}

VectorX SaddleSolver::solve(const VectorX& b) {
  const SparseMatrix& S = impl_->S;
  const double bnorm = b.norm();
  report_ = {};
  if (bnorm == 0.0) return VectorX::Zero(b.size());

  VectorX y;
  if (settings_.method == SolverMethod::Direct) {
    y = impl_->lu.solve(b);
    // a few sweeps of iterative refinement if the factorisation lost accuracy
    for (int sweep = 0; sweep < 3; ++sweep) {
      const VectorX r = b - S * y;
      report_.rel_residual = r.norm() / bnorm;
      if (report_.rel_residual <= settings_.rel_tol) break;
      y += impl_->lu.solve(r);
      ++report_.iterations;
    }
    report_.rel_residual = (b - S * y).norm() / bnorm;
  } else {
    Eigen::GMRES<SparseMatrix, SaddlePreconditioner> gmres;
    gmres.preconditioner() = SaddlePreconditioner(impl_->factors);
    gmres.set_restart(settings_.restart);
    gmres.setMaxIterations(settings_.max_iterations);
    gmres.compute(S);
    // GMRES stops on the preconditioned residual; restart from the current
    // iterate with a tighter tolerance until the true residual is small.
    y = VectorX::Zero(b.size());
    double tol = 0.25 * settings_.rel_tol;
    for (int pass = 0; pass < 4; ++pass) {
      gmres.setTolerance(tol);
      y = gmres.solveWithGuess(b, y);
      report_.iterations += static_cast<int>(gmres.iterations());
      report_.rel_residual = (b - S * y).norm() / bnorm;
      if (report_.rel_residual <= settings_.rel_tol) break;
      tol *= std::max(1e-4, 0.5 * settings_.rel_tol / report_.rel_residual);
    }
  }
  if (!std::isfinite(report_.rel_residual) || report_.rel_residual > settings_.rel_tol) {
    throw SolverError("linear solve reached relative residual " + format_sci(report_.rel_residual) + " after " + std::to_string(report_.iterations) + " iterations" +
                      " (tolerance " + format_sci(settings_.rel_tol) + ")");
  }
  return y;
}

}  // namespace willmore
