// Serial versus OpenMP assembly of the full block system, and one BDF2 step
// with each linear solver.
#include <benchmark/benchmark.h>

#include <cmath>

#include "willmore/assembly.hpp"
#include "willmore/mesh_generators.hpp"
#include "willmore/solver.hpp"

using namespace willmore;

namespace {

const AnalyticSurface kClifford(Torus{1.0, 1.0 / std::sqrt(2.0)});

SurfaceMesh torus_mesh(int n) { return gen_torus_mesh(kClifford, 4 * n, 3 * n, 2.0, 2); }

void assemble(benchmark::State& st, ExecutionPolicy policy) {
  const auto mesh = torus_mesh(static_cast<int>(st.range(0)));
  const Assembler asmb(mesh);
  const VectorX u = exact_u(mesh, kClifford);
  AssemblyOptions opt;
  opt.policy = policy;
  for (auto _ : st) benchmark::DoNotOptimize(asmb.system(mesh.positions(), u, opt));
  st.counters["nodes"] = mesh.node_count();
}

void step(benchmark::State& st, SolverMethod method) {
  const auto mesh = torus_mesh(static_cast<int>(st.range(0)));
  StepperConfig c;
  c.order = 2;
  c.tau = 0.0125;
  c.linear.method = method;
  FlowSolver solver(mesh, c);
  for (auto _ : st) {
    st.PauseTiming();
    auto s = solver.init_state(kClifford);
    st.ResumeTiming();
    solver.step(s);
  }
  st.counters["nodes"] = mesh.node_count();
}

}  // namespace

BENCHMARK_CAPTURE(assemble, serial, ExecutionPolicy::Serial)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(assemble, parallel, ExecutionPolicy::Parallel)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(step, direct, SolverMethod::Direct)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(step, gmres, SolverMethod::Gmres)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
