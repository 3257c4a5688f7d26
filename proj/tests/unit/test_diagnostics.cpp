#include <doctest.h>

#include <cmath>
#include <sstream>

#include "willmore/diagnostics.hpp"
#include "willmore/mesh_generators.hpp"

using namespace willmore;

namespace {

const AnalyticSurface kUnitSphere(Sphere{1.0});
const AnalyticSurface kClifford(Torus{1.0, 1.0 / std::sqrt(2.0)});

std::vector<SurfaceMesh> sphere_levels() {
  std::vector<SurfaceMesh> m;
  for (int f : {3, 4, 6}) m.push_back(gen_geodesic_sphere(kUnitSphere, f, 2));
  return m;
}

std::vector<SurfaceMesh> torus_levels() {
  std::vector<SurfaceMesh> m;
  for (auto [a, b] : {std::pair{16, 12}, std::pair{23, 17}, std::pair{32, 24}})
    m.push_back(gen_torus_mesh(kClifford, a, b, 2.0, 2));
  return m;
}

double rate(double e0, double e1, double h0, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); }

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("EOC of synthetic C h^2 errors is exactly 2") {
  const std::vector<double> h{0.4, 0.4 / std::sqrt(2.0), 0.2, 0.1, 0.03};
  std::vector<double> e;
  for (double hi : h) e.push_back(3.7 * hi * hi);
  const auto r = eoc(e, h);
  CHECK(std::isnan(r[0]));
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(std::abs(r[i] - 2.0) <= 1e-12);

  // scale-free
  std::vector<double> scaled;
  for (double x : e) scaled.push_back(1e-7 * x);
  const auto rs = eoc(scaled, h);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(std::abs(rs[i] - r[i]) <= 1e-12);
}

TEST_CASE("stationary surfaces") {
  CHECK(is_stationary(kUnitSphere, FlowMode::Willmore));
  CHECK(is_stationary(kUnitSphere, FlowMode::SurfaceDiffusion));
  CHECK(is_stationary(kClifford, FlowMode::Willmore));
  CHECK_FALSE(is_stationary(kClifford, FlowMode::SurfaceDiffusion));
  CHECK_FALSE(is_stationary(AnalyticSurface(Torus{2.0, 1.0}), FlowMode::Willmore));
  CHECK_FALSE(is_stationary(AnalyticSurface(Ellipsoid{}), FlowMode::Willmore));
}

TEST_CASE("errors vanish for the exact initial state") {
  const auto m = gen_torus_mesh(kClifford, 10, 8, 2.0, 2);
  FlowSolver solver(m, StepperConfig{});
  const auto s = solver.init_state(kClifford);
  const auto e = error_vs_exact(m, s, kClifford);
  for (int i = 0; i < VariableErrors::kCount; ++i) {
    CAPTURE(VariableErrors::name(i));
    CHECK(e[i] == 0.0);
  }
  CHECK_THROWS_AS(error_vs_exact(m, s, AnalyticSurface(Ellipsoid{})), UnavailableFieldError);
}

TEST_CASE("variable names follow the CSV columns") {
  const char* expected[] = {"x", "v", "H", "nu", "V", "z"};
  for (int i = 0; i < VariableErrors::kCount; ++i) CHECK(std::string(VariableErrors::name(i)) == expected[i]);
}

TEST_CASE("defect integrands vanish for constant data on a flat element") {
  const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const auto m = elevate_degree(v, {{0, 1, 2}}, 2, [&](const std::array<int, 3>& c, const Vec3& b) {
    return Vec3(b[0] * v[c[0]] + b[1] * v[c[1]] + b[2] * v[c[2]]);
  });
  const auto g = element_geometry(m, m.positions(), 0);
  const std::vector<double> H(6, 0.0);
  const std::vector<Vec3> nu(6, Vec3(0, 0, 1));
  for (int q = 0; q < g.quad_count; ++q) {
    const auto p = point_fields(m.reference(), g, q, H.data(), nu.data(), true);
    CHECK(p.grad_H.norm() <= 1e-13);
    CHECK(p.A.norm() <= 1e-13);
    CHECK(p.absA2 <= 1e-13);
    CHECK(std::abs(p.Q) <= 1e-13);
  }
}

TEST_CASE("sphere defects and identity residual") {
  const auto levels = sphere_levels();
  const auto defects = defect_check(kUnitSphere, levels);
  const auto identity = identity_residual(kUnitSphere, levels);
  REQUIRE(defects.size() == 3);
  for (const auto& d : defects) {
    CHECK(d.dw_z_dual <= d.dw_z_m + 1e-14);
    CHECK(d.dw_V_dual <= d.dw_V_m + 1e-14);
    CHECK(d.du_nu_dual <= d.du_nu_m + 1e-14);
  }
  for (const auto& r : identity) CHECK(r.dual <= r.m + 1e-14);
  const auto& a = defects[1];
  const auto& b = defects[2];
  CHECK(rate(a.dw_z_m, b.dw_z_m, a.h, b.h) >= 1.8);
  CHECK(rate(identity[1].m, identity[2].m, identity[1].h, identity[2].h) >= 1.8);
  CHECK(rate(identity[1].dual, identity[2].dual, identity[1].h, identity[2].h) >= 1.8);
  // on the sphere the w-defect and the identity residual share the nu-block
  for (std::size_t i = 0; i < levels.size(); ++i)
    CHECK(defects[i].dw_z_dual == doctest::Approx(identity[i].dual).epsilon(1e-8));
}

TEST_CASE("torus defects decay") {
  const auto levels = torus_levels();
  const auto d = defect_check(kClifford, levels);
  const auto id = identity_residual(kClifford, levels);
  for (std::size_t i = 1; i < d.size(); ++i) {
    CAPTURE(i);
    CHECK(rate(d[i - 1].du_nu_m, d[i].du_nu_m, d[i - 1].h, d[i].h) >= 1.8);
    CHECK(rate(d[i - 1].du_nu_dual, d[i].du_nu_dual, d[i - 1].h, d[i].h) >= 1.8);
    CHECK(rate(id[i - 1].dual, id[i].dual, id[i - 1].h, id[i].h) >= 1.8);
    CHECK(rate(id[i - 1].m, id[i].m, id[i - 1].h, id[i].h) >= 1.8);
  }
}

TEST_CASE("defects do not depend on the node numbering") {
  const auto m = gen_torus_mesh(kClifford, 8, 6, 2.0, 2);
  std::vector<int> perm(m.node_count());
  for (int j = 0; j < m.node_count(); ++j) {
    perm[j] = j < m.vertex_count() ? (j * 7 + 3) % m.vertex_count()
                                   : m.vertex_count() + (m.node_count() - 1 - j);
  }
  const auto p = m.permuted(perm);
  const auto a = defect_check(kClifford, {m});
  const auto b = defect_check(kClifford, {p});
  const auto ia = identity_residual(kClifford, {m});
  const auto ib = identity_residual(kClifford, {p});
  CHECK(a[0].h == b[0].h);
  CHECK(a[0].du_nu_m == doctest::Approx(b[0].du_nu_m).epsilon(1e-12));
  CHECK(a[0].du_H_dual == doctest::Approx(b[0].du_H_dual).epsilon(1e-12));
  CHECK(a[0].dw_z_m == doctest::Approx(b[0].dw_z_m).epsilon(1e-12));
  CHECK(ia[0].dual == doctest::Approx(ib[0].dual).epsilon(1e-12));
}

TEST_CASE("a short convergence study on the torus") {
  std::vector<StudyLevel> levels;
  for (const auto& m : torus_levels()) levels.push_back({m, 0.0125});
  StepperConfig c;
  c.order = 1;
  c.linear.method = SolverMethod::Gmres;
  const auto result = convergence_study(kClifford, levels, c, 0.05);
  REQUIRE(result.records.size() == 3);
  for (const auto& r : result.records) CHECK(r.ok());
  const int H = 2, nu = 3;
  CHECK(result.final_min_eoc({H, nu}) >= 1.8);

  std::ostringstream csv;
  write_errors_csv(csv, result);
  const std::string text = csv.str();
  CHECK(text.rfind("level,h,tau,err_x,err_v,err_H,err_nu,err_V,err_z,energy_T,eoc_x,eoc_v,eoc_H,eoc_nu,eoc_V,eoc_z,status\n",
                   0) == 0);
  CHECK(text.find("nan") == std::string::npos);
}

TEST_CASE("a failing level is recorded and the study continues") {
  std::vector<StudyLevel> levels;
  for (auto [a, b] : {std::pair{8, 6}, std::pair{10, 8}, std::pair{12, 9}})
    levels.push_back({gen_torus_mesh(kClifford, a, b, 2.0, 2), 0.0125});
  // exact data cannot be evaluated on a mesh of a different torus
  levels[1].mesh = gen_torus_mesh(AnalyticSurface(Torus{1.0, 0.5}), 10, 8, 2.0, 2);
  StepperConfig c;
  c.order = 2;
  const auto result = convergence_study(kClifford, levels, c, 3.0);
  REQUIRE(result.records.size() == 3);
  CHECK_FALSE(result.records[1].ok());
  CHECK(result.records[0].ok());
  CHECK(result.records[2].ok());
  CHECK(std::isnan(result.eoc[1].H));
}

}  // TEST_SUITE
