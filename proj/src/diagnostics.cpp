#include "willmore/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <variant>

#include "willmore/csv.hpp"
#include "willmore/norms.hpp"

namespace willmore {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double k_norm(const SparseMatrix& M, const SparseMatrix& A, const VectorX& e) { return norms(M, A, e).k; }

}  // namespace

const char* VariableErrors::name(int i) {
  static constexpr const char* names[kCount] = {"x", "v", "H", "nu", "V", "z"};
  return names[i];
}

double VariableErrors::operator[](int i) const {
  switch (i) {
    case 0: return x;
    case 1: return v;
    case 2: return H;
    case 3: return nu;
    case 4: return V;
    default: return z;
  }
}

double& VariableErrors::operator[](int i) {
  switch (i) {
    case 0: return x;
    case 1: return v;
    case 2: return H;
    case 3: return nu;
    case 4: return V;
    default: return z;
  }
}

void VariableErrors::max_with(const VariableErrors& o) {
  for (int i = 0; i < kCount; ++i) (*this)[i] = std::max((*this)[i], o[i]);
}

bool is_stationary(const AnalyticSurface& surface, FlowMode mode) {
  if (std::holds_alternative<Sphere>(surface.kind())) return true;
  if (const auto* t = std::get_if<Torus>(&surface.kind())) {
    return mode == FlowMode::Willmore &&
           std::abs(t->major_radius - std::sqrt(2.0) * t->minor_radius) <= 1e-12 * t->major_radius;
  }
  return false;
}

ExactReference::ExactReference(const SurfaceMesh& mesh, const AnalyticSurface& surface, FlowMode mode) {
  if (!is_stationary(surface, mode)) {
    throw UnavailableFieldError("convergence study requires a stationary analytic surface");
  }
  const int N = mesh.node_count();
  x_ = mesh.positions();
  u_ = exact_u(mesh, surface);
  w_ = *exact_w(mesh, surface, mode);
  v_.resize(3 * N);
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < 3; ++l) v_[l * N + j] = w_[j] * u_[(1 + l) * N + j];
  }
  const SystemBlocks sb = Assembler(mesh).geometry(x_);
  M_ = sb.mass();
  A_ = sb.stiffness();
}

VariableErrors ExactReference::errors(const VectorX& x, const VectorX& u, const VectorX& w, const VectorX& v) const {
  const Eigen::Index N = M_.rows();
  VariableErrors e;
  e.x = k_norm(M_, A_, x - x_);
  e.v = k_norm(M_, A_, v - v_);
  e.H = k_norm(M_, A_, u.segment(0, N) - u_.segment(0, N));
  e.nu = k_norm(M_, A_, u.segment(N, 3 * N) - u_.segment(N, 3 * N));
  e.V = k_norm(M_, A_, w.segment(0, N) - w_.segment(0, N));
  e.z = k_norm(M_, A_, w.segment(N, 3 * N) - w_.segment(N, 3 * N));
  return e;
}

VariableErrors ExactReference::errors(const FlowState& s) const { return errors(s.x(), s.u(), s.w, s.v); }

VariableErrors error_vs_exact(const SurfaceMesh& mesh, const FlowState& state, const AnalyticSurface& surface,
                              FlowMode mode) {
  return ExactReference(mesh, surface, mode).errors(state);
}

std::vector<double> eoc(const std::vector<double>& err, const std::vector<double>& h) {
  if (err.size() != h.size()) throw Error("eoc: error and mesh-width sequences differ in length");
  std::vector<double> out(err.size(), kNaN);
  for (std::size_t k = 1; k < err.size(); ++k) {
    out[k] = std::log(err[k - 1] / err[k]) / std::log(h[k - 1] / h[k]);
  }
  return out;
}

double StudyResult::final_min_eoc(const std::vector<int>& variables) const {
  if (eoc.size() < 2) return kNaN;
  double m = std::numeric_limits<double>::infinity();
  for (int i : variables) {
    const double e = eoc.back()[i];
    if (!std::isfinite(e)) return kNaN;
    m = std::min(m, e);
  }
  return m;
}

StudyResult convergence_study(const AnalyticSurface& surface, const std::vector<StudyLevel>& levels,
                              const StepperConfig& config, double T) {
  if (!is_stationary(surface, config.mode)) {
    throw UnavailableFieldError("convergence study requires a stationary analytic surface");
  }
  StudyResult result;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const SurfaceMesh& mesh = levels[k].mesh;
    ErrorRecord rec;
    rec.level = static_cast<int>(k);
    rec.h = mesh_width(mesh);
    rec.tau = levels[k].tau;
    try {
      StepperConfig cfg = config;
      cfg.tau = levels[k].tau;
      FlowSolver solver(mesh, cfg);
      const ExactReference ref(mesh, surface, cfg.mode);
      FlowState state = solver.init_state(surface);
      VariableErrors worst;
      const RunSummary summary = solver.run(state, T, [&](const Snapshot& s) {
        worst.max_with(ref.errors(*s.x, *s.u, *s.w, *s.v));
      });
      rec.err = worst;
      rec.energy_T = summary.final.energy;
    } catch (const Error& e) {
      rec.failure = e.what();
      for (int i = 0; i < VariableErrors::kCount; ++i) rec.err[i] = kNaN;
      rec.energy_T = kNaN;
    }
    result.records.push_back(rec);
  }
  compute_eoc(result);
  return result;
}

void compute_eoc(StudyResult& result) {
  std::vector<double> h;
  for (const auto& r : result.records) h.push_back(r.h);
  result.eoc.assign(result.records.size(), VariableErrors{kNaN, kNaN, kNaN, kNaN, kNaN, kNaN});
  for (int i = 0; i < VariableErrors::kCount; ++i) {
    std::vector<double> e;
    for (const auto& r : result.records) e.push_back(r.err[i]);
    const std::vector<double> rates = eoc(e, h);
    for (std::size_t k = 0; k < rates.size(); ++k) result.eoc[k][i] = rates[k];
  }
}

void write_errors_csv(std::ostream& out, const StudyResult& result) {
  out << "level,h,tau";
  for (int i = 0; i < VariableErrors::kCount; ++i) out << ",err_" << VariableErrors::name(i);
  out << ",energy_T";
  for (int i = 0; i < VariableErrors::kCount; ++i) out << ",eoc_" << VariableErrors::name(i);
  out << ",status\n";
  auto cell = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    const ErrorRecord& r = result.records[k];
    out << r.level << ',' << format_double(r.h) << ',' << format_double(r.tau);
    for (int i = 0; i < VariableErrors::kCount; ++i) out << ',' << cell(r.err[i]);
    out << ',' << cell(r.energy_T);
    for (int i = 0; i < VariableErrors::kCount; ++i) out << ',' << cell(result.eoc[k][i]);
    std::string status = r.ok() ? "ok" : "failed: " + r.failure;
    for (char& c : status) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << ',' << status << '\n';
  }
}

std::vector<DefectRecord> defect_check(const AnalyticSurface& surface, const std::vector<SurfaceMesh>& meshes,
                                       FlowMode mode) {
  std::vector<DefectRecord> out;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    const SurfaceMesh& mesh = meshes[k];
    const int N = mesh.node_count();
    const ExactReference ref(mesh, surface, mode);
    const SystemBlocks sb =
        Assembler(mesh).system(ref.x(), ref.u(), {ExecutionPolicy::Serial, mode == FlowMode::Willmore});
    const SparseMatrix& M = ref.M();
    const SparseMatrix& A = ref.A();
    const DualNorm dual(M, A);

    // stationary: u*' = 0
    VectorX du = -apply_block(A, ref.w()) - sb.f();
    du.segment(0, N) -= sb.F1_matrix() * ref.w().segment(0, N);
    du.segment(N, 3 * N) -= sb.F2_matrix() * ref.w().segment(N, 3 * N);
    const VectorX dw = apply_block(M, ref.w()) + apply_block(A, ref.u()) - sb.g();

    DefectRecord r;
    r.level = static_cast<int>(k);
    r.h = mesh_width(mesh);
    r.du_H_m = dual.m_norm_of_residual(du.segment(0, N));
    r.du_H_dual = dual.of_residual(du.segment(0, N));
    r.du_nu_m = dual.m_norm_of_residual(du.segment(N, 3 * N));
    r.du_nu_dual = dual.of_residual(du.segment(N, 3 * N));
    r.dw_V_m = dual.m_norm_of_residual(dw.segment(0, N));
    r.dw_V_dual = dual.of_residual(dw.segment(0, N));
    r.dw_z_m = dual.m_norm_of_residual(dw.segment(N, 3 * N));
    r.dw_z_dual = dual.of_residual(dw.segment(N, 3 * N));
    out.push_back(r);
  }
  return out;
}

std::vector<IdentityRecord> identity_residual(const AnalyticSurface& surface, const std::vector<SurfaceMesh>& meshes) {
  if (!surface.has_exact_velocity()) throw UnavailableFieldError("identity residual needs exact z = grad H");
  std::vector<IdentityRecord> out;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    const SurfaceMesh& mesh = meshes[k];
    const int N = mesh.node_count();
    const VectorX u = exact_u(mesh, surface);
    const VectorX w = *exact_w(mesh, surface, FlowMode::Willmore);
    const SystemBlocks sb = Assembler(mesh).system(mesh.positions(), u);
    const SparseMatrix M = sb.mass();
    const SparseMatrix A = sb.stiffness();
    const VectorX r = apply_block(M, VectorX(w.segment(N, 3 * N))) + apply_block(A, VectorX(u.segment(N, 3 * N))) - sb.g2;
    const DualNorm dual(M, A);
    IdentityRecord rec;
    rec.level = static_cast<int>(k);
    rec.h = mesh_width(mesh);
    rec.dual = dual.of_residual(r);
    rec.m = dual.m_norm_of_residual(r);
    out.push_back(rec);
  }
  return out;
}

}  // namespace willmore
