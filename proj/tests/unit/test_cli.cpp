#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "willmore/commands.hpp"
#include "willmore/config.hpp"
#include "willmore/mesh_io.hpp"

using namespace willmore;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("willmore_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Captured {
  int code = 0;
  std::string out, err;
};

Captured run(const std::string& command, const RunConfig& config, std::optional<double> assert_order = {}) {
  std::ostringstream out, err;
  CommandOptions o;
  o.out = &out;
  o.err = &err;
  o.assert_order = assert_order;
  Captured c;
  if (command == "run") c.code = cmd_run(config, o);
  if (command == "converge") c.code = cmd_converge(config, o);
  if (command == "check") c.code = cmd_check(config, o);
  if (command == "mesh") c.code = cmd_mesh(config, o);
  c.out = out.str();
  c.err = err.str();
  return c;
}

Captured run_file(const std::string& command, const fs::path& config_path) {
  std::ostringstream out, err;
  CommandOptions o;
  o.out = &out;
  o.err = &err;
  const int code = run_command(command, config_path.string(), o);
  return {code, out.str(), err.str()};
}

const char* kSmallSphereRun = R"(
[surface]
kind = sphere

[mesh]
generator = icosphere
subdivisions = 1

[time]
tau = 0.05
T = 0.2

[output]
snapshot_stride = 2
)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults and a full configuration") {
  const auto c = parse(R"(
# comment
[surface]
kind = torus
major_radius = 1
minor_radius = 0.5

[mesh]
generator = torus_grid
n_major = 20
n_minor = 12
grading = 1.5
degree = 3

[time]
tau = 0.01
T = 2
order = 1

[scheme]
mode = surface_diffusion
theta = zero
projections = false
assembly = parallel

[linear]
method = gmres
tolerance = 1e-9
max_iterations = 100
restart = 30

[output]
directory = results
snapshot_stride = 5
vtk = false

[study]
levels = 10x8 14x11 20x16
halve_tau = true
variables = H nu
)");
  const auto& t = std::get<Torus>(c.surface.kind());
  CHECK(t.major_radius == 1.0);
  CHECK(t.minor_radius == 0.5);
  CHECK(c.mesh.generator == MeshGenerator::TorusGrid);
  CHECK(c.mesh.resolution.a == 20);
  CHECK(c.mesh.resolution.b == 12);
  CHECK(c.mesh.grading == 1.5);
  CHECK(c.mesh.degree == 3);
  CHECK(c.stepper.tau == 0.01);
  CHECK(c.T == 2.0);
  CHECK(c.stepper.order == 1);
  CHECK(c.stepper.mode == FlowMode::SurfaceDiffusion);
  CHECK(c.stepper.theta == ThetaPolicy::Zero);
  CHECK_FALSE(c.stepper.projections);
  CHECK(c.stepper.policy == ExecutionPolicy::Parallel);
  CHECK(c.stepper.linear.method == SolverMethod::Gmres);
  CHECK(c.stepper.linear.rel_tol == 1e-9);
  CHECK(c.stepper.linear.max_iterations == 100);
  CHECK(c.stepper.linear.restart == 30);
  CHECK(c.output_dir == "results");
  CHECK(c.snapshot_stride == 5);
  CHECK_FALSE(c.write_vtk);
  REQUIRE(c.study.levels.size() == 3);
  CHECK(c.study.levels[2].a == 20);
  CHECK(c.study.levels[2].b == 16);
  CHECK(c.study.halve_tau);
  CHECK(c.study.variables == std::vector<std::string>{"H", "nu"});
  CHECK(c.warnings.empty());

  const auto d = parse("");
  CHECK(std::holds_alternative<Sphere>(d.surface.kind()));
  CHECK(d.mesh.degree == 2);
  CHECK(d.stepper.order == 2);
  CHECK(d.stepper.projections);
}

TEST_CASE("invalid values name the field") {
  const auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("[time]\ntau = 0\n").find("time.tau") != std::string::npos);
  CHECK(message("[time]\ntau = -0.1\n").find("time.tau") != std::string::npos);
  CHECK(message("[time]\nT = abc\n").find("time.T") != std::string::npos);
  CHECK(message("[time]\norder = 3\n").find("time.order") != std::string::npos);
  CHECK(message("[mesh]\ndegree = 5\n").find("mesh.degree") != std::string::npos);
  CHECK(message("[mesh]\nfrequncy = 5\n").find("mesh.frequncy") != std::string::npos);
  CHECK(message("[meshes]\nfrequency = 5\n").find("meshes") != std::string::npos);
  CHECK(message("[surface]\nkind = cube\n").find("surface.kind") != std::string::npos);
  CHECK(message("[surface]\nkind = sphere\nradius = -1\n").find("surface.radius") != std::string::npos);
  CHECK(message("[surface]\nkind = torus\nmajor_radius = 1\nminor_radius = 2\n").find("minor_radius") !=
        std::string::npos);
  CHECK(message("[study]\nvariables = H q\n").find("study.variables") != std::string::npos);
  CHECK(message("[surface]\nkind = torus\n[mesh]\ngenerator = icosphere\n").find("mesh.generator") != std::string::npos);
}

TEST_CASE("syntax errors report the line") {
  try {
    parse("[time]\ntau = 0.1\n[broken\n");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("degree one is accepted with a warning") {
  const auto c = parse("[mesh]\ndegree = 1\n");
  CHECK(c.mesh.degree == 1);
  REQUIRE(c.warnings.size() == 1);
  CHECK(c.warnings[0].find("degree") != std::string::npos);
}

TEST_CASE("mesh command: icosphere node count and files") {
  auto c = parse("[mesh]\ngenerator = icosphere\nsubdivisions = 2\n");
  const auto dir = scratch("mesh");
  c.output_dir = dir.string();
  const auto r = run("mesh", c);
  CHECK(r.code == kExitOk);
  // 10 * (2^s)^2 * k^2 + 2 nodes
  CHECK(r.out.find("N = 642\n") != std::string::npos);
  CHECK(r.out.find("E = 320\n") != std::string::npos);
  CHECK(fs::exists(dir / "mesh.off"));
  CHECK(read_file(dir / "mesh.vtk").rfind("# vtk DataFile Version", 0) == 0);
}

TEST_CASE("mesh command: Clifford torus area") {
  auto c = parse(
      "[surface]\nkind = torus\n[mesh]\ngenerator = torus_grid\nn_major = 32\nn_minor = 24\ngrading = 2\n");
  c.output_dir = scratch("torus_mesh").string();
  const auto r = run("mesh", c);
  REQUIRE(r.code == kExitOk);
  const auto pos = r.out.find("area = ");
  REQUIRE(pos != std::string::npos);
  const double area = std::stod(r.out.substr(pos + 7));
  CHECK(std::abs(area - 4.0 * std::numbers::pi * std::numbers::pi / std::sqrt(2.0)) <= 1e-3);
}

TEST_CASE("OFF round trip through a file mesh keeps the coordinates byte for byte") {
  const auto dir = scratch("off");
  auto c = parse("[mesh]\ngenerator = icosphere\nsubdivisions = 1\ndegree = 1\n");
  c.output_dir = (dir / "first").string();
  REQUIRE(run("mesh", c).code == kExitOk);
  const fs::path first = dir / "first" / "mesh.off";

  auto d = parse("[mesh]\ngenerator = file\nfile = " + first.string() + "\ndegree = 1\n");
  d.output_dir = (dir / "second").string();
  REQUIRE(run("mesh", d).code == kExitOk);
  CHECK(read_file(first) == read_file(dir / "second" / "mesh.off"));
}

TEST_CASE("corrupt mesh file gives exit code 1") {
  const auto dir = scratch("corrupt");
  {
    std::ofstream f(dir / "bad.off");
    f << "OFF\n4 4 0\n0 0 0\n1 0 0\n";
  }
  {
    std::ofstream f(dir / "config.ini");
    f << "[mesh]\ngenerator = file\nfile = " << (dir / "bad.off").string() << "\n[output]\ndirectory = "
      << (dir / "out").string() << "\n";
  }
  const auto r = run_file("mesh", dir / "config.ini");
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("line") != std::string::npos);
}

TEST_CASE("missing or invalid configuration gives exit code 1") {
  const auto dir = scratch("invalid");
  CHECK(run_file("run", dir / "does_not_exist.ini").code == kExitConfig);
  {
    std::ofstream f(dir / "bad.ini");
    f << "[time]\ntau = 0\n";
  }
  const auto r = run_file("run", dir / "bad.ini");
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("time.tau") != std::string::npos);
  CHECK(run_file("bogus", dir / "bad.ini").code == kExitConfig);
}

TEST_CASE("run writes observables and snapshots, reproducibly") {
  auto c = parse(kSmallSphereRun);
  const auto a = scratch("run_a"), b = scratch("run_b");
  c.output_dir = a.string();
  const auto ra = run("run", c);
  c.output_dir = b.string();
  const auto rb = run("run", c);
  REQUIRE(ra.code == kExitOk);
  REQUIRE(rb.code == kExitOk);
  const std::string csv = read_file(a / "observables.csv");
  CHECK(csv == read_file(b / "observables.csv"));
  CHECK(csv.rfind("t,energy,area,min_radius,max_radius,min_nu_len,max_nu_len\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header, t = 0 and four steps
  CHECK(csv.find("nan") == std::string::npos);
  CHECK(csv.find("inf") == std::string::npos);
  CHECK(fs::exists(a / "snapshot_000000.vtk"));
  CHECK(fs::exists(a / "snapshot_000002.vtk"));
  CHECK(fs::exists(a / "snapshot_000004.vtk"));
  CHECK_FALSE(fs::exists(a / "snapshot_000001.vtk"));
}

TEST_CASE("run reports an aborted flow with exit code 2") {
  auto c = parse(R"(
[surface]
kind = perturbed_torus
minor_radius = 0.70710678118654752
eps = 0.1
modes = 6
[mesh]
generator = torus_grid
n_major = 24
n_minor = 12
[time]
tau = 1e8
T = 2e10
[output]
vtk = false
)");
  const auto dir = scratch("abort");
  c.output_dir = dir.string();
  const auto r = run("run", c);
  CHECK(r.code == kExitAborted);
  CHECK(fs::exists(dir / "abort.txt"));
  CHECK(read_file(dir / "abort.txt").find("last_good_step") != std::string::npos);
  CHECK(read_file(dir / "observables.csv").find("nan") == std::string::npos);
}

TEST_CASE("converge self-test yields EOC exactly 2") {
  auto c = parse("[study]\nlevels = 3 4 6 8\nself_test = true\n");
  const auto dir = scratch("selftest");
  c.output_dir = dir.string();
  const auto r = run("converge", c, 1.8);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  const std::string csv = read_file(dir / "errors.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 17);
    if (rows > 0) {
      for (int k = 10; k < 16; ++k) CHECK(std::abs(std::stod(cells[k]) - 2.0) <= 1e-12);
    }
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("converge refuses non-stationary surfaces") {
  auto c = parse("[surface]\nkind = ellipsoid\n[study]\nlevels = 3 4 6\n");
  c.output_dir = scratch("ellipsoid").string();
  CHECK_THROWS_WITH_AS(run("converge", c), "convergence study requires a stationary analytic surface",
                       UnavailableFieldError);

  const auto dir = scratch("ellipsoid_file");
  {
    std::ofstream f(dir / "c.ini");
    f << "[surface]\nkind = ellipsoid\n[study]\nlevels = 3 4 6\n[output]\ndirectory = " << dir.string() << "\n";
  }
  const auto r = run_file("converge", dir / "c.ini");
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("convergence study requires a stationary analytic surface") != std::string::npos);
}

TEST_CASE("converge needs three levels") {
  auto c = parse("[study]\nlevels = 3 4\n");
  c.output_dir = scratch("two_levels").string();
  CHECK_THROWS_AS(run("converge", c), ConfigError);
}

TEST_CASE("check passes on the sphere") {
  auto c = parse("[study]\nlevels = 3 4 6\n");
  c.output_dir = scratch("check").string();
  const auto r = run("check", c);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("identity (dual)") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("shipped configurations parse") {
  for (const auto& entry : fs::directory_iterator(WILLMORE_TEST_CONFIG_DIR)) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
  }
}

}  // TEST_SUITE
