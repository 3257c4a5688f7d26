#include "willmore/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

namespace willmore {

namespace {

std::vector<std::vector<bool>> scalar_blocks() { return {{true, true}, {true, true}}; }

// Unknown order (n_1, n_2, n_3, z_1, z_2, z_3).
std::vector<std::vector<bool>> vector_blocks() {
  std::vector<std::vector<bool>> p(6, std::vector<bool>(6, false));
  for (int l = 0; l < 3; ++l) {
    p[l][l] = true;          // c M
    p[3 + l][l] = true;      // A
    p[3 + l][3 + l] = true;  // M
    for (int m = 0; m < 3; ++m) p[l][3 + m] = true;  // -(A + F2)
  }
  return p;
}

void add_into(SparseMatrix& S, const std::vector<int>& slots, const std::vector<double>& values, double c) {
  double* dst = S.valuePtr();
  for (std::size_t k = 0; k < values.size(); ++k) dst[slots[k]] += c * values[k];
}

bool all_finite(const VectorX& v) { return v.allFinite(); }

}  // namespace

void StepperConfig::validate() const {
  if (order != 1 && order != 2) throw Error("bdf order must be 1 or 2");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error("tau must be positive");
  if (!(linear.rel_tol > 0.0)) throw Error("linear solver tolerance must be positive");
}

std::vector<double> bdf_delta(int order) {
  if (order == 1) return {1.0, -1.0};
  if (order == 2) return {1.5, -2.0, 0.5};
  throw Error("bdf order must be 1 or 2");
}

std::vector<double> bdf_gamma(int order) {
  if (order == 1) return {1.0};
  if (order == 2) return {2.0, -1.0};
  throw Error("bdf order must be 1 or 2");
}

VectorX exact_u(const SurfaceMesh& mesh, const AnalyticSurface& surface) {
  const int N = mesh.node_count();
  VectorX u(4 * N);
  for (int j = 0; j < N; ++j) {
    const ExactFields f = surface.exact_fields(mesh.node(j));
    u[j] = f.H;
    for (int l = 0; l < 3; ++l) u[(1 + l) * N + j] = f.nu[l];
  }
  return u;
}

std::optional<VectorX> exact_w(const SurfaceMesh& mesh, const AnalyticSurface& surface, FlowMode mode) {
  if (!surface.has_exact_velocity()) return std::nullopt;
  const int N = mesh.node_count();
  VectorX w(4 * N);
  for (int j = 0; j < N; ++j) {
    const ExactFields f = surface.exact_fields(mesh.node(j));
    // surface diffusion moves with V = Delta H, the Willmore velocity minus Q
    w[j] = (mode == FlowMode::Willmore) ? *f.V : *f.V - f.Q;
    for (int l = 0; l < 3; ++l) w[(1 + l) * N + j] = (*f.z)[l];
  }
  return w;
}

FlowSolver::FlowSolver(const SurfaceMesh& mesh, StepperConfig config)
    : config_(config),
      assembler_(mesh),
      scalar_pattern_(*assembler_.pattern(), scalar_blocks()),
      vector_pattern_(*assembler_.pattern(), vector_blocks()),
      scalar_system_(scalar_pattern_.zero_matrix()),
      vector_system_(vector_pattern_.zero_matrix()),
      scalar_solver_(config.linear),
      vector_solver_(config.linear),
      initial_det_(min_metric_determinants(mesh, mesh.positions())) {
  config_.validate();
}

FlowState FlowSolver::init_state(const AnalyticSurface& surface) {
  const SurfaceMesh& m = mesh();
  std::optional<VectorX> w_exact;
  if (config_.theta == ThetaPolicy::Exact) w_exact = exact_w(m, surface, config_.mode);
  return init_state(m.positions(), exact_u(m, surface), w_exact);
}

FlowState FlowSolver::init_state(const VectorX& x0, const VectorX& u0, const std::optional<VectorX>& w_exact) {
  const int N = mesh().node_count();
  if (x0.size() != 3 * N || u0.size() != 4 * N) throw Error("init_state: wrong vector sizes");
  AssemblyOptions opts{config_.policy, config_.mode == FlowMode::Willmore && !config_.zero_Q};
  const SystemBlocks sb = assembler_.system(x0, u0, opts);
  const SparseMatrix M = sb.mass();
  const SparseMatrix A = sb.stiffness();

  // w_bar(0) solves M w + A u0 = g
  Eigen::SimplicialLDLT<SparseMatrix> mass_solver(M);
  if (mass_solver.info() != Eigen::Success) throw SolverError("init_state: mass matrix factorisation failed");
  const VectorX rhs = sb.g() - apply_block(A, u0);
  VectorX w_bar(4 * N);
  for (int c = 0; c < 4; ++c) w_bar.segment(c * N, N) = mass_solver.solve(rhs.segment(c * N, N));

  FlowState s;
  s.x_hist.push_back(x0);
  s.u_hist.push_back(u0);
  if (w_exact) {
    if (w_exact->size() != 4 * N) throw Error("init_state: w_exact must have length 4N");
    s.theta = apply_block(M, *w_exact - w_bar);
    s.w = *w_exact;
    s.exact_start = true;
  } else {
    s.theta = VectorX::Zero(4 * N);
    s.w = w_bar;
  }
  s.v.resize(3 * N);
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < 3; ++l) s.v[l * N + j] = s.w[j] * u0[(1 + l) * N + j];
  }
  s.obs = observe(s);
  return s;
}

void FlowSolver::project(VectorX& u, VectorX& w, int n_nodes) {
  const int N = n_nodes;
  for (int j = 0; j < N; ++j) {
    Vec3 n(u[N + j], u[2 * N + j], u[3 * N + j]);
    const double len = n.norm();
    if (len > 0.0) n /= len;
    Vec3 z(w[N + j], w[2 * N + j], w[3 * N + j]);
    z -= n * n.dot(z);
    for (int l = 0; l < 3; ++l) {
      u[(1 + l) * N + j] = n[l];
      w[(1 + l) * N + j] = z[l];
    }
  }
}

void FlowSolver::fill_scalar_system(const SystemBlocks& sb, double c) {
  SparseMatrix& S = scalar_system_;
  std::fill(S.valuePtr(), S.valuePtr() + S.nonZeros(), 0.0);
  add_into(S, scalar_pattern_.slots(0, 0), sb.M, c);
  add_into(S, scalar_pattern_.slots(0, 1), sb.A, -1.0);
  add_into(S, scalar_pattern_.slots(0, 1), sb.F1, -1.0);
  add_into(S, scalar_pattern_.slots(1, 0), sb.A, 1.0);
  add_into(S, scalar_pattern_.slots(1, 1), sb.M, 1.0);
}

void FlowSolver::fill_vector_system(const SystemBlocks& sb, double c) {
  SparseMatrix& S = vector_system_;
  std::fill(S.valuePtr(), S.valuePtr() + S.nonZeros(), 0.0);
  for (int l = 0; l < 3; ++l) {
    add_into(S, vector_pattern_.slots(l, l), sb.M, c);
    add_into(S, vector_pattern_.slots(3 + l, l), sb.A, 1.0);
    add_into(S, vector_pattern_.slots(3 + l, 3 + l), sb.M, 1.0);
    add_into(S, vector_pattern_.slots(l, 3 + l), sb.A, -1.0);
    for (int m = 0; m < 3; ++m) {
      add_into(S, vector_pattern_.slots(l, 3 + m), sb.F2[SystemBlocks::f2_block(l, m)], -1.0);
    }
  }
}

void FlowSolver::check_degeneracy(const VectorX& x) const {
  const std::vector<double> det = min_metric_determinants(mesh(), x);
  for (std::size_t e = 0; e < det.size(); ++e) {
    if (det[e] < config_.degenerate_ratio * initial_det_[e]) {
      throw DegenerateElementError(static_cast<int>(e), "metric determinant " + std::to_string(det[e]) +
                                                            " fell below " + std::to_string(config_.degenerate_ratio) +
                                                            " of its initial value " + std::to_string(initial_det_[e]));
    }
  }
}

void FlowSolver::step(FlowState& s) {
  const int N = mesh().node_count();
  const int order = std::min<int>(config_.order, static_cast<int>(s.x_hist.size()));
  const std::vector<double> delta = bdf_delta(order);
  const std::vector<double> gamma = bdf_gamma(order);
  const double tau = config_.tau;

  VectorX x_ext = VectorX::Zero(3 * N), u_ext = VectorX::Zero(4 * N);
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    x_ext += gamma[j] * s.x_hist[j];
    u_ext += gamma[j] * s.u_hist[j];
  }
  check_degeneracy(x_ext);

  AssemblyOptions opts{config_.policy, config_.mode == FlowMode::Willmore && !config_.zero_Q};
  const SystemBlocks sb = assembler_.system(x_ext, u_ext, opts);
  const SparseMatrix M = sb.mass();
  const SparseMatrix A = sb.stiffness();
  const double c = delta[0] / tau;

  // history terms sum_{j>=1} delta_j u^{n-j}, sum_{j>=1} delta_j x^{n-j}
  VectorX u_hist_sum = VectorX::Zero(4 * N), x_hist_sum = VectorX::Zero(3 * N);
  for (std::size_t j = 1; j < delta.size(); ++j) {
    u_hist_sum += delta[j] * s.u_hist[j - 1];
    x_hist_sum += delta[j] * s.x_hist[j - 1];
  }
  const VectorX Mu_hist = apply_block(M, u_hist_sum) / tau;

  VectorX u_new(4 * N), w_new(4 * N);
  {
    fill_scalar_system(sb, c);
    VectorX b(2 * N);
    b.segment(0, N) = -Mu_hist.segment(0, N);
    b.segment(N, N) = sb.g1 + s.theta.segment(0, N);
    scalar_solver_.factorize(scalar_system_, M, A, c);
    const VectorX y = scalar_solver_.solve(b);
    u_new.segment(0, N) = y.segment(0, N);
    w_new.segment(0, N) = y.segment(N, N);
  }
  {
    fill_vector_system(sb, c);
    VectorX b(6 * N);
    b.segment(0, 3 * N) = sb.f2 - Mu_hist.segment(N, 3 * N);
    b.segment(3 * N, 3 * N) = sb.g2 + s.theta.segment(N, 3 * N);
    vector_solver_.factorize(vector_system_, M, A, c);
    const VectorX y = vector_solver_.solve(b);
    u_new.segment(N, 3 * N) = y.segment(0, 3 * N);
    w_new.segment(N, 3 * N) = y.segment(3 * N, 3 * N);
  }

  VectorX v_new(3 * N);
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < 3; ++l) v_new[l * N + j] = w_new[j] * u_new[(1 + l) * N + j];
  }
  VectorX x_new = (tau * v_new - x_hist_sum) / delta[0];

  if (config_.projections) project(u_new, w_new, N);
  if (!all_finite(x_new) || !all_finite(u_new) || !all_finite(w_new)) {
    throw SolverError("non-finite values after step " + std::to_string(s.step + 1));
  }

  const std::size_t keep = static_cast<std::size_t>(std::max(config_.order, 1));
  s.x_hist.push_front(std::move(x_new));
  s.u_hist.push_front(std::move(u_new));
  while (s.x_hist.size() > keep) s.x_hist.pop_back();
  while (s.u_hist.size() > keep) s.u_hist.pop_back();
  s.v = std::move(v_new);
  s.w = std::move(w_new);
  s.step += 1;
  s.t = s.step * tau;
}

Observables FlowSolver::observe(const FlowState& s) const {
  const int N = mesh().node_count();
  const SystemBlocks sb = assembler_.geometry(s.x(), {config_.policy, true});
  const SparseMatrix M = sb.mass();
  Observables o;
  o.t = s.t;
  o.energy = willmore_energy(M, s.u().segment(0, N));
  o.area = surface_area(M);
  o.min_radius = o.min_nu_len = std::numeric_limits<double>::infinity();
  o.max_radius = o.max_nu_len = 0.0;
  for (int j = 0; j < N; ++j) {
    const double r = node_vec3(s.x(), N, j).norm();
    const double nl = Vec3(s.u()[N + j], s.u()[2 * N + j], s.u()[3 * N + j]).norm();
    o.min_radius = std::min(o.min_radius, r);
    o.max_radius = std::max(o.max_radius, r);
    o.min_nu_len = std::min(o.min_nu_len, nl);
    o.max_nu_len = std::max(o.max_nu_len, nl);
  }
  if (!std::isfinite(o.energy) || !std::isfinite(o.area)) throw SolverError("non-finite observables");
  return o;
}

RunSummary FlowSolver::run(FlowState& s, double T, const Observer& observer) {
  if (!(T > 0.0)) throw Error("final time must be positive");
  auto emit = [&] {
    if (!observer) return;
    Snapshot snap{s.step, s.t, &s.x(), &s.u(), &s.w, &s.v, s.obs};
    observer(snap);
  };
  RunSummary summary;
  emit();
  const int steps = static_cast<int>(std::llround(std::ceil((T - s.t) / config_.tau - 1e-9)));
  for (int n = 0; n < steps; ++n) {
    FlowState last_good = s;
    try {
      step(s);
      const double previous = s.obs.energy;
      s.obs = observe(s);
      summary.energy_max_increase = std::max(summary.energy_max_increase, s.obs.energy - previous);
    } catch (const Error& e) {
      throw FlowAborted(std::string("step ") + std::to_string(last_good.step + 1) + " at t = " +
                            std::to_string(last_good.t + config_.tau) + ": " + e.what(),
                        std::move(last_good));
    }
    emit();
  }
  summary.steps = steps;
  summary.t = s.t;
  summary.final = s.obs;
  return summary;
}

}  // namespace willmore
