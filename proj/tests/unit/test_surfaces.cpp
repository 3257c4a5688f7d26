#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "willmore/surfaces.hpp"

using namespace willmore;
using std::numbers::pi;

namespace {

const double kSqrt2 = std::sqrt(2.0);

Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

Vec3 random_point(const AnalyticSurface& s, std::mt19937& rng) {
  if (s.is_genus_zero()) return s.project(s.from_unit_sphere(random_unit(rng)));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  return s.torus_point(angle(rng), angle(rng));
}

void check_weingarten(const ExactFields& f) {
  CHECK(f.nu.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((f.A - f.A.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((f.A * f.nu).norm() < 1e-10);
  CHECK(std::abs(f.A.trace() - f.H) < 1e-10);
  // nonzero eigenvalues are the principal curvatures
  Eigen::SelfAdjointEigenSolver<Mat3> es(f.A);
  const auto ev = es.eigenvalues();
  int zero = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(ev[i]) < std::abs(ev[zero])) zero = i;
  }
  double product = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (i != zero) product *= ev[i];
  }
  CHECK(std::abs(product - f.K) < 1e-10);
}

}  // namespace

TEST_SUITE("surfaces") {

TEST_CASE("unit sphere at the north pole") {
  const AnalyticSurface s(Sphere{1.0});
  const auto f = s.exact_fields({0, 0, 1});
  CHECK((f.nu - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK(f.H == doctest::Approx(2.0));
  CHECK(f.K == doctest::Approx(1.0));
  CHECK(f.absA2 == doctest::Approx(2.0));
  CHECK(std::abs(f.Q) < 1e-14);
  REQUIRE(f.V.has_value());
  REQUIRE(f.z.has_value());
  CHECK(*f.V == 0.0);
  CHECK(f.z->norm() == 0.0);
}

TEST_CASE("Clifford torus at the outer equator") {
  const AnalyticSurface s(Torus{1.0, 1.0 / kSqrt2});
  const auto f = s.exact_fields({1.0 + 1.0 / kSqrt2, 0, 0});
  CHECK((f.nu - Vec3(1, 0, 0)).norm() < 1e-12);
  CHECK(f.H == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.K == doctest::Approx(2.0 * kSqrt2 - 2.0).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Mat3> es(f.A);
  CHECK(es.eigenvalues()[0] == doctest::Approx(0.0));
  CHECK(es.eigenvalues()[1] == doctest::Approx(2.0 - kSqrt2).epsilon(1e-12));
  CHECK(es.eigenvalues()[2] == doctest::Approx(kSqrt2).epsilon(1e-12));
}

TEST_CASE("Clifford torus is stationary") {
  const AnalyticSurface s(Torus{1.0, 1.0 / kSqrt2});
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto f = s.exact_fields(random_point(s, rng));
    REQUIRE(f.V.has_value());
    CHECK(std::abs(*f.V) < 1e-10);
  }
}

TEST_CASE("a non-Clifford torus has nonzero Willmore velocity") {
  const AnalyticSurface s(Torus{2.0, 1.0});
  const auto f = s.exact_fields(s.torus_point(0.3, 0.4));
  REQUIRE(f.V.has_value());
  CHECK(std::abs(*f.V) > 1e-3);
}

TEST_CASE("projection examples") {
  const AnalyticSurface unit(Sphere{1.0});
  CHECK((unit.project({0, 0, 2}) - Vec3(0, 0, 1)).norm() < 1e-15);
  const AnalyticSurface two(Sphere{2.0});
  CHECK((two.project({3, 4, 0}) - Vec3(1.2, 1.6, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(unit.project(Vec3::Zero()), ProjectionError);

  const AnalyticSurface torus(Torus{1.0, 1.0 / kSqrt2});
  const Vec3 q = torus.project({1, 0, 0});
  CHECK(std::abs(torus.implicit(q)) <= 1e-12);
  // brute-force closest point over a dense parameter sweep
  double best = 1e300;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double phi = -0.1 + 0.2 * j / 39.0;
      const Vec3 p = torus.torus_point(phi, 2.0 * pi * i / n);
      best = std::min(best, (p - Vec3(1, 0, 0)).norm());
    }
  }
  CHECK((q - Vec3(1, 0, 0)).norm() == doctest::Approx(best).epsilon(1e-5));
}

TEST_CASE("projection is idempotent and lands on the surface") {
  std::mt19937 rng(3);
  std::normal_distribution<double> jitter(0.0, 0.03);
  const std::vector<AnalyticSurface> surfaces{AnalyticSurface(Sphere{1.5}), AnalyticSurface(Torus{1.0, 1.0 / kSqrt2}),
                                              AnalyticSurface(Ellipsoid{1.0, 0.8, 0.6}), AnalyticSurface(RedBloodCell{})};
  for (const auto& s : surfaces) {
    CAPTURE(s.name());
    for (int i = 0; i < 100; ++i) {
      const Vec3 p = random_point(s, rng) + Vec3(jitter(rng), jitter(rng), jitter(rng));
      const Vec3 q = s.project(p);
      CHECK(std::abs(s.implicit(q)) <= 1e-12);
      CHECK((s.project(q) - q).norm() <= 1e-12);
    }
  }
}

TEST_CASE("Weingarten map invariants at random points") {
  std::mt19937 rng(11);
  const std::vector<AnalyticSurface> surfaces{AnalyticSurface(Sphere{1.0}), AnalyticSurface(Sphere{0.7}),
                                              AnalyticSurface(Torus{1.0, 1.0 / kSqrt2}), AnalyticSurface(Torus{2.0, 0.5})};
  for (const auto& s : surfaces) {
    CAPTURE(s.name());
    for (int i = 0; i < 1000; ++i) {
      const auto f = s.exact_fields(random_point(s, rng));
      CHECK(std::abs(f.absA2 - (f.H * f.H - 2.0 * f.K)) <= 1e-10);
      CHECK(std::abs(f.Q - (-0.5 * f.H * f.H * f.H + f.absA2 * f.H)) <= 1e-12);
      if (i % 10 == 0) check_weingarten(f);
      REQUIRE(f.z.has_value());
      CHECK(std::abs(f.z->dot(f.nu)) <= 1e-10);
    }
  }
}

TEST_CASE("sphere velocity and gradient vanish everywhere") {
  const AnalyticSurface s(Sphere{0.8});
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto f = s.exact_fields(random_point(s, rng));
    CHECK(*f.V == 0.0);
    CHECK(f.z->norm() == 0.0);
  }
}

TEST_CASE("remaining kinds give unit normals and consistent invariants") {
  std::mt19937 rng(13);
  const std::vector<AnalyticSurface> surfaces{AnalyticSurface(Ellipsoid{1.0, 0.8, 0.6}), AnalyticSurface(RedBloodCell{}),
                                              AnalyticSurface(PerturbedTorus{1.0, 0.5, 0.2, 6})};
  for (const auto& s : surfaces) {
    CAPTURE(s.name());
    CHECK_FALSE(s.has_exact_velocity());
    for (int i = 0; i < 200; ++i) {
      const auto f = s.exact_fields(random_point(s, rng));
      CHECK(f.nu.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(f.absA2 - (f.H * f.H - 2.0 * f.K)) <= 1e-9);
      CHECK((f.A * f.nu).norm() < 1e-9);
      CHECK_FALSE(f.V.has_value());
      CHECK_FALSE(f.z.has_value());
    }
  }
}

TEST_CASE("off-surface points are rejected") {
  const AnalyticSurface s(Ellipsoid{1.0, 0.8, 0.6});
  CHECK_THROWS_AS(s.exact_fields({2.0, 0.0, 0.0}), OffSurfaceError);
  const AnalyticSurface t(Torus{1.0, 0.5});
  CHECK_THROWS_AS(t.exact_fields({0.0, 0.0, 0.0}), OffSurfaceError);
}

TEST_CASE("normal derivative along parameter lines matches A t") {
  // Central differences of nu against A applied to a fourth-order tangent;
  // the oblique direction mixes both principal curvatures.
  const AnalyticSurface s(Torus{1.0, 1.0 / kSqrt2});
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  for (int i = 0; i < 20; ++i) {
    const double phi = angle(rng), theta = angle(rng);
    const auto f = s.exact_fields(s.torus_point(phi, theta));
    for (const Vec2 dir : {Vec2(1.0, 0.0), Vec2(0.0, 1.0), Vec2(1.0, 0.7)}) {
      const auto point = [&](double step) { return s.torus_point(phi + step * dir[0], theta + step * dir[1]); };
      double prev = 0.0;
      for (double h : {2e-2, 1e-2}) {
        const Vec3 dnu = (s.exact_fields(point(h)).nu - s.exact_fields(point(-h)).nu) / (2 * h);
        const Vec3 t = (8.0 * (point(h) - point(-h)) - (point(2 * h) - point(-2 * h))) / (12 * h);
        const double err = (dnu - f.A * t).norm();
        CHECK(err <= 10.0 * h * h);
        if (prev > 1e-9) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
        prev = err;
      }
    }
  }
}

TEST_CASE("exact areas") {
  CHECK(*AnalyticSurface(Sphere{2.0}).exact_area() == doctest::Approx(16.0 * pi));
  CHECK(*AnalyticSurface(Torus{1.0, 1.0 / kSqrt2}).exact_area() == doctest::Approx(4.0 * pi * pi / kSqrt2));
  CHECK_FALSE(AnalyticSurface(Ellipsoid{}).exact_area().has_value());
}

}  // TEST_SUITE
