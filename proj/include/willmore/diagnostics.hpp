#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "willmore/solver.hpp"

namespace willmore {

/// Per-variable errors (or EOCs) for x, v, H, nu, V, z.
struct VariableErrors {
  double x = 0.0, v = 0.0, H = 0.0, nu = 0.0, V = 0.0, z = 0.0;

  static constexpr int kCount = 6;
  static const char* name(int i);
  double operator[](int i) const;
  double& operator[](int i);
  void max_with(const VariableErrors& other);
};

/// Exact nodal data of a stationary surface on its interpolating mesh, and
/// the K(x*) norm used to measure errors. Stationary means V = 0 for the
/// flow mode, so the exact solution at any time equals the initial data.
class ExactReference {
 public:
  ExactReference(const SurfaceMesh& mesh, const AnalyticSurface& surface, FlowMode mode = FlowMode::Willmore);

  const VectorX& x() const { return x_; }
  const VectorX& u() const { return u_; }
  const VectorX& w() const { return w_; }
  const VectorX& v() const { return v_; }
  const SparseMatrix& M() const { return M_; }
  const SparseMatrix& A() const { return A_; }

  /// ||. ||_{K(x*)} errors of all variables.
  VariableErrors errors(const VectorX& x, const VectorX& u, const VectorX& w, const VectorX& v) const;
  VariableErrors errors(const FlowState& state) const;

 private:
  VectorX x_, u_, w_, v_;
  SparseMatrix M_, A_;
};

/// Errors of `state` against the exact stationary solution. Throws
/// UnavailableFieldError when the surface is not a stationary solution with
/// closed-form V and z.
VariableErrors error_vs_exact(const SurfaceMesh& mesh, const FlowState& state, const AnalyticSurface& surface,
                              FlowMode mode = FlowMode::Willmore);

/// Whether `surface` is a stationary solution with exact data (sphere for
/// both modes, Clifford torus for Willmore flow).
bool is_stationary(const AnalyticSurface& surface, FlowMode mode);

/// EOC_k = log(e_{k-1} / e_k) / log(h_{k-1} / h_k); entry 0 is NaN.
std::vector<double> eoc(const std::vector<double>& err, const std::vector<double>& h);

struct ErrorRecord {
  int level = 0;
  double h = 0.0;
  double tau = 0.0;
  VariableErrors err;  // L-infinity in time of the K(x*) errors
  double energy_T = 0.0;
  std::string failure;  // empty on success
  bool ok() const { return failure.empty(); }
};

struct StudyLevel {
  SurfaceMesh mesh;
  double tau = 0.0;
};

struct StudyResult {
  std::vector<ErrorRecord> records;
  std::vector<VariableErrors> eoc;  // eoc[0] is all NaN

  /// Smallest EOC over the given variables on the finest pair.
  double final_min_eoc(const std::vector<int>& variables) const;
};

/// Runs every level to time T and measures errors. A failing level is
/// recorded and the study continues.
StudyResult convergence_study(const AnalyticSurface& surface, const std::vector<StudyLevel>& levels,
                              const StepperConfig& config, double T);

/// Fills result.eoc from the records.
void compute_eoc(StudyResult& result);

/// errors.csv: level,h,tau,err_x,err_v,err_H,err_nu,err_V,err_z,energy_T,
/// eoc_x,eoc_v,eoc_H,eoc_nu,eoc_V,eoc_z,status. EOC cells of the first
/// level and of failed levels are empty.
void write_errors_csv(std::ostream& out, const StudyResult& result);

/// Residuals of the exact nodal data in the semidiscrete equations
///   d_u = M u*' - A w* - F w* - f,   d_w = M w* + A u* - g,
/// split into scalar (H, V) and vector (nu, z) parts, each reported in the
/// M norm sqrt(r^T M^{-1} r) and the dual norm sqrt(r^T K^{-1} r).
struct DefectRecord {
  int level = 0;
  double h = 0.0;
  double du_H_m = 0.0, du_H_dual = 0.0;
  double du_nu_m = 0.0, du_nu_dual = 0.0;
  double dw_V_m = 0.0, dw_V_dual = 0.0;
  double dw_z_m = 0.0, dw_z_dual = 0.0;
};
std::vector<DefectRecord> defect_check(const AnalyticSurface& surface, const std::vector<SurfaceMesh>& meshes,
                                       FlowMode mode = FlowMode::Willmore);

/// Weak form of grad H = Delta nu + |A|^2 nu with exact data:
///   r = M z* + A n* - g2(x*, u*), reported in the dual and M norms.
struct IdentityRecord {
  int level = 0;
  double h = 0.0;
  double dual = 0.0;
  double m = 0.0;
};
std::vector<IdentityRecord> identity_residual(const AnalyticSurface& surface, const std::vector<SurfaceMesh>& meshes);

}  // namespace willmore
