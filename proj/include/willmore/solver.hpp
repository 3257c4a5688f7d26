#pragma once

#include <deque>
#include <functional>
#include <optional>

#include "willmore/assembly.hpp"
#include "willmore/linear_solver.hpp"
#include "willmore/surfaces.hpp"

namespace willmore {

enum class FlowMode { Willmore, SurfaceDiffusion };
enum class ThetaPolicy { Exact, Zero };

struct StepperConfig {
  int order = 2;  // BDF order, 1 or 2
  double tau = 0.025;
  bool projections = true;
  FlowMode mode = FlowMode::Willmore;
  ThetaPolicy theta = ThetaPolicy::Exact;
  LinearSolverSettings linear;
  ExecutionPolicy policy = ExecutionPolicy::Serial;
  /// Evaluate the Willmore right-hand sides with Q_h replaced by zero.
  bool zero_Q = false;
  /// Abort when a metric determinant falls below this fraction of its
  /// initial value.
  double degenerate_ratio = 1e-14;

  void validate() const;
};

/// BDF coefficients delta_0..delta_p and extrapolation weights gamma.
std::vector<double> bdf_delta(int order);
std::vector<double> bdf_gamma(int order);

struct Observables {
  double t = 0.0;
  double energy = 0.0;
  double area = 0.0;
  double min_radius = 0.0;
  double max_radius = 0.0;
  double min_nu_len = 0.0;
  double max_nu_len = 0.0;
};

struct FlowState {
  double t = 0.0;
  int step = 0;
  /// Newest first; at most max(order, 1) entries are kept.
  std::deque<VectorX> x_hist;
  std::deque<VectorX> u_hist;
  VectorX v;      // 3N
  VectorX w;      // 4N
  VectorX theta;  // 4N, fixed at initialisation
  /// Willmore-velocity availability at t = 0 (theta built from exact data).
  bool exact_start = false;
  Observables obs;

  const VectorX& x() const { return x_hist.front(); }
  const VectorX& u() const { return u_hist.front(); }
};

/// What an observer receives after every step (and once at t = 0).
struct Snapshot {
  int step = 0;
  double t = 0.0;
  const VectorX* x = nullptr;
  const VectorX* u = nullptr;
  const VectorX* w = nullptr;
  const VectorX* v = nullptr;
  Observables obs;
};
using Observer = std::function<void(const Snapshot&)>;

struct RunSummary {
  int steps = 0;
  double t = 0.0;
  Observables final;
  double energy_max_increase = 0.0;  // largest W(t_n) - W(t_{n-1})
};

/// Raised by FlowSolver::run when a step fails; carries the last good
/// state so callers can dump diagnostics.
class FlowAborted : public SolverError {
 public:
  FlowAborted(const std::string& what, FlowState last_good)
      : SolverError(what), last_good_(std::move(last_good)) {}
  const FlowState& last_good() const { return last_good_; }

 private:
  FlowState last_good_;
};

/// Linearly implicit BDF integrator of the coupled (H, n, V, z) system on
/// a fixed mesh topology.
///
/// Each step assembles all blocks at the extrapolated state and solves
///   (d0/tau) M u - (A + F) w = f - (1/tau) M sum_j d_j u^{n-j},
///   M w + A u = g + theta.
/// F, M and A are block diagonal between the scalar (H, V) unknowns and
/// the vector (n, z) unknowns, so the 8N system is solved exactly as two
/// decoupled systems of size 2N and 6N.
class FlowSolver {
 public:
  FlowSolver(const SurfaceMesh& mesh, StepperConfig config);

  const SurfaceMesh& mesh() const { return assembler_.mesh(); }
  const StepperConfig& config() const { return config_; }
  const Assembler& assembler() const { return assembler_; }

  /// Interpolates exact H and nu at the mesh nodes and builds theta.
  FlowState init_state(const AnalyticSurface& surface);
  /// Initialisation from given nodal data; with `w_exact` theta makes the
  /// algebraic variable start at w_exact, otherwise theta = 0.
  FlowState init_state(const VectorX& x0, const VectorX& u0, const std::optional<VectorX>& w_exact);

  /// One step of size tau. The first step of BDF2 uses BDF1.
  void step(FlowState& state);

  /// Steps until t >= T (to round-off). The observer sees t = 0 too.
  RunSummary run(FlowState& state, double T, const Observer& observer = {});

  Observables observe(const FlowState& state) const;

  /// Normalise n_j and remove the normal part of z_j at every node.
  static void project(VectorX& u, VectorX& w, int n_nodes);

 private:
  void fill_scalar_system(const SystemBlocks& sb, double c);
  void fill_vector_system(const SystemBlocks& sb, double c);
  void check_degeneracy(const VectorX& x) const;

  StepperConfig config_;
  Assembler assembler_;
  BlockPattern scalar_pattern_;
  BlockPattern vector_pattern_;
  SparseMatrix scalar_system_;
  SparseMatrix vector_system_;
  SaddleSolver scalar_solver_;
  SaddleSolver vector_solver_;
  std::vector<double> initial_det_;
};

/// Exact nodal data at the mesh nodes: u* = (H; nu) and, when available,
/// w* = (V; z) for the given flow mode.
VectorX exact_u(const SurfaceMesh& mesh, const AnalyticSurface& surface);
std::optional<VectorX> exact_w(const SurfaceMesh& mesh, const AnalyticSurface& surface, FlowMode mode);

}  // namespace willmore
