#pragma once

#include <optional>
#include <string>
#include <variant>

#include "willmore/types.hpp"

namespace willmore {

struct Sphere {
  double radius = 1.0;
};

/// Torus of revolution about the z-axis. Parametrised by the major angle phi
/// and the minor angle theta; theta = 0 is the outer equator.
struct Torus {
  double major_radius = 1.0;
  double minor_radius = 0.70710678118654752440;
};

struct Ellipsoid {
  double a = 1.0;
  double b = 0.8;
  double c = 0.6;
};

/// Axisymmetric biconcave disc,
///   z = +-R0 * sqrt(1 - s) * (c0 + c1 s + c2 s^2),   s = (x^2 + y^2) / R0^2,
/// i.e. the zero set of F = z^2 - R0^2 (1 - s) C(s)^2. The profile
/// polynomial C must stay positive on [0, 1].
struct RedBloodCell {
  double radius = 1.0;
  double c0 = 0.2;
  double c1 = 1.0;
  double c2 = -0.6;
};

/// Torus whose minor radius varies with the major angle:
///   r(phi) = r * (1 + eps * cos(m * phi)).
struct PerturbedTorus {
  double major_radius = 1.0;
  double minor_radius = 0.70710678118654752440;
  double eps = 0.2;
  int modes = 6;
};

struct ExactFields {
  Vec3 nu = Vec3::Zero();
  double H = 0.0;
  double K = 0.0;
  Mat3 A = Mat3::Zero();
  double absA2 = 0.0;
  double Q = 0.0;
  /// Willmore normal velocity dH + Q; only known in closed form for
  /// spheres and tori.
  std::optional<double> V;
  /// Tangential gradient of H; same availability as V.
  std::optional<Vec3> z;
};

class AnalyticSurface {
 public:
  using Kind = std::variant<Sphere, Torus, Ellipsoid, RedBloodCell, PerturbedTorus>;

  AnalyticSurface(Kind kind);  // NOLINT: implicit from any kind

  const Kind& kind() const { return kind_; }
  std::string name() const;

  /// True when the surface is handled through a parametrisation (points are
  /// placed in parameter space), false when it is the zero set of an
  /// implicit function.
  bool is_parametric() const;
  /// Whether exact V and z are available in closed form.
  bool has_exact_velocity() const;

  /// Implicit function, positive outside. Not defined for the perturbed
  /// torus.
  double implicit(const Vec3& p) const;
  Vec3 implicit_gradient(const Vec3& p) const;

  /// Maps p from a tubular neighbourhood onto the surface.
  Vec3 project(const Vec3& p) const;

  /// All geometric quantities at a point of the surface.
  ExactFields exact_fields(const Vec3& p) const;

  /// Smooth map from the unit sphere onto this surface, defined for the
  /// genus-0 kinds (sphere, ellipsoid, red blood cell).
  Vec3 from_unit_sphere(const Vec3& s) const;
  bool is_genus_zero() const;

  /// Parametric position for the torus kinds (phi, theta in radians).
  Vec3 torus_point(double phi, double theta) const;

  /// Exact area where a closed form exists (sphere, torus).
  std::optional<double> exact_area() const;

 private:
  Kind kind_;
};

namespace surfaces {
constexpr double kProjectionTolerance = 1e-12;
constexpr int kProjectionMaxIterations = 50;
constexpr double kOffSurfaceTolerance = 1e-8;

/// Curvature quantities of a regular parametrised surface patch from the
/// first and second partial derivatives. The normal is oriented as
/// Xu x Xv.
ExactFields parametric_fields(const Vec3& Xu, const Vec3& Xv, const Vec3& Xuu, const Vec3& Xuv,
                              const Vec3& Xvv);

/// Curvature quantities of the zero set of an implicit function from its
/// gradient and Hessian (normal = gradient direction).
ExactFields implicit_fields(const Vec3& gradient, const Mat3& hessian);

/// Fills |A|^2, K and Q from A and H.
void complete_invariants(ExactFields& f);
}  // namespace surfaces

}  // namespace willmore
