#include "willmore/surfaces.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace willmore {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;

struct TorusAngles {
  double phi;
  double theta;
};

TorusAngles torus_angles(const Vec3& p, double major_radius) {
  const double rho = std::hypot(p.x(), p.y());
  return {std::atan2(p.y(), p.x()), std::atan2(p.z(), rho - major_radius)};
}

double rbc_profile(const RedBloodCell& s, double t) { return s.c0 + t * (s.c1 + t * s.c2); }

// g(s) = (1 - s) C(s)^2 with its first two derivatives.
struct RbcG {
  double g, dg, ddg;
};

RbcG rbc_g(const RedBloodCell& s, double t) {
  const double C = rbc_profile(s, t);
  const double dC = s.c1 + 2.0 * s.c2 * t;
  const double ddC = 2.0 * s.c2;
  return {(1.0 - t) * C * C, -C * C + 2.0 * (1.0 - t) * C * dC,
          -4.0 * C * dC + 2.0 * (1.0 - t) * (dC * dC + C * ddC)};
}

Vec3 newton_project(const AnalyticSurface& surface, Vec3 q) {
  for (int it = 0; it < surfaces::kProjectionMaxIterations; ++it) {
    const double F = surface.implicit(q);
    if (std::abs(F) <= surfaces::kProjectionTolerance) return q;
    const Vec3 g = surface.implicit_gradient(q);
    const double g2 = g.squaredNorm();
    if (!(g2 > 0.0)) throw ProjectionError("projection: vanishing implicit gradient");
    q -= (F / g2) * g;
  }
  if (std::abs(surface.implicit(q)) <= surfaces::kProjectionTolerance) return q;
  throw ProjectionError("projection: Newton iteration did not converge in " +
                        std::to_string(surfaces::kProjectionMaxIterations) + " iterations");
}

struct PerturbedDerivs {
  Vec3 X, Xu, Xv, Xuu, Xuv, Xvv;
};

// u = phi, v = theta.
PerturbedDerivs perturbed_torus_derivs(const PerturbedTorus& s, double phi, double theta) {
  const double m = s.modes;
  const double r = s.minor_radius * (1.0 + s.eps * std::cos(m * phi));
  const double dr = -s.minor_radius * s.eps * m * std::sin(m * phi);
  const double ddr = -s.minor_radius * s.eps * m * m * std::cos(m * phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);

  const double rho = s.major_radius + r * ct;
  const double rho_u = dr * ct, rho_v = -r * st;
  const double rho_uu = ddr * ct, rho_uv = -dr * st, rho_vv = -r * ct;

  PerturbedDerivs d;
  d.X = {rho * cp, rho * sp, r * st};
  d.Xu = {rho_u * cp - rho * sp, rho_u * sp + rho * cp, dr * st};
  d.Xv = {rho_v * cp, rho_v * sp, r * ct};
  d.Xuu = {rho_uu * cp - 2.0 * rho_u * sp - rho * cp, rho_uu * sp + 2.0 * rho_u * cp - rho * sp,
           ddr * st};
  d.Xuv = {rho_uv * cp - rho_v * sp, rho_uv * sp + rho_v * cp, dr * ct};
  d.Xvv = {rho_vv * cp, rho_vv * sp, -r * st};
  return d;
}

ExactFields torus_fields(const Torus& s, const Vec3& p) {
  const double R = s.major_radius, r = s.minor_radius;
  const auto [phi, theta] = torus_angles(p, R);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double rho = R + r * ct;

  const Vec3 e_theta(-st * cp, -st * sp, ct);
  const Vec3 e_phi(-sp, cp, 0.0);
  const double k1 = 1.0 / r;
  const double k2 = ct / rho;

  ExactFields f;
  f.nu = Vec3(ct * cp, ct * sp, st);
  f.A = k1 * e_theta * e_theta.transpose() + k2 * e_phi * e_phi.transpose();
  f.H = k1 + k2;
  surfaces::complete_invariants(f);
  f.K = k1 * k2;
  // H depends on theta only: H_theta = -R sin(theta) / rho^2 and
  // Delta H = (1 / (rho r^2)) d/dtheta(rho H_theta).
  const double H_theta = -R * st / (rho * rho);
  const double lap_H = -R * (R * ct + r) / (r * r * rho * rho * rho);
  f.V = lap_H + f.Q;
  f.z = (H_theta / r) * e_theta;
  return f;
}

}  // namespace

namespace surfaces {

void complete_invariants(ExactFields& f) {
  f.absA2 = f.A.squaredNorm();
  f.K = 0.5 * (f.H * f.H - f.absA2);
  f.Q = -0.5 * f.H * f.H * f.H + f.absA2 * f.H;
}

ExactFields parametric_fields(const Vec3& Xu, const Vec3& Xv, const Vec3& Xuu, const Vec3& Xuv,
                              const Vec3& Xvv) {
  Eigen::Matrix<double, 3, 2> J;
  J.col(0) = Xu;
  J.col(1) = Xv;
  const Eigen::Matrix2d G = J.transpose() * J;
  const Eigen::Matrix2d Ginv = G.inverse();
  const Vec3 n = Xu.cross(Xv).normalized();
  Eigen::Matrix2d II;
  II << Xuu.dot(n), Xuv.dot(n), Xuv.dot(n), Xvv.dot(n);

  ExactFields f;
  f.nu = n;
  f.A = -J * Ginv * II * Ginv * J.transpose();
  f.A = 0.5 * (f.A + f.A.transpose()).eval();
  f.H = f.A.trace();
  complete_invariants(f);
  return f;
}

ExactFields implicit_fields(const Vec3& gradient, const Mat3& hessian) {
  const double g = gradient.norm();
  ExactFields f;
  f.nu = gradient / g;
  const Mat3 P = Mat3::Identity() - f.nu * f.nu.transpose();
  f.A = P * hessian * P / g;
  f.A = 0.5 * (f.A + f.A.transpose()).eval();
  f.H = f.A.trace();
  complete_invariants(f);
  return f;
}

}  // namespace surfaces

AnalyticSurface::AnalyticSurface(Kind kind) : kind_(std::move(kind)) {}

std::string AnalyticSurface::name() const {
  return std::visit(overloaded{[](const Sphere&) { return std::string("sphere"); },
                               [](const Torus&) { return std::string("torus"); },
                               [](const Ellipsoid&) { return std::string("ellipsoid"); },
                               [](const RedBloodCell&) { return std::string("rbc"); },
                               [](const PerturbedTorus&) { return std::string("perturbed_torus"); }},
                    kind_);
}

bool AnalyticSurface::is_parametric() const {
  return std::holds_alternative<Sphere>(kind_) || std::holds_alternative<PerturbedTorus>(kind_);
}

bool AnalyticSurface::has_exact_velocity() const {
  return std::holds_alternative<Sphere>(kind_) || std::holds_alternative<Torus>(kind_);
}

bool AnalyticSurface::is_genus_zero() const {
  return std::holds_alternative<Sphere>(kind_) || std::holds_alternative<Ellipsoid>(kind_) ||
         std::holds_alternative<RedBloodCell>(kind_);
}

double AnalyticSurface::implicit(const Vec3& p) const {
  return std::visit(
      overloaded{
          [&](const Sphere& s) { return p.squaredNorm() - s.radius * s.radius; },
          [&](const Torus& s) {
            const double R2 = s.major_radius * s.major_radius;
            const double t = p.squaredNorm() + R2 - s.minor_radius * s.minor_radius;
            return t * t - 4.0 * R2 * (p.x() * p.x() + p.y() * p.y());
          },
          [&](const Ellipsoid& s) {
            return p.x() * p.x() / (s.a * s.a) + p.y() * p.y() / (s.b * s.b) +
                   p.z() * p.z() / (s.c * s.c) - 1.0;
          },
          [&](const RedBloodCell& s) {
            const double t = (p.x() * p.x() + p.y() * p.y()) / (s.radius * s.radius);
            return p.z() * p.z() - s.radius * s.radius * rbc_g(s, t).g;
          },
          [&](const PerturbedTorus& s) {
            const double phi = std::atan2(p.y(), p.x());
            const double r = s.minor_radius * (1.0 + s.eps * std::cos(s.modes * phi));
            const double d = std::hypot(p.x(), p.y()) - s.major_radius;
            return d * d + p.z() * p.z() - r * r;
          }},
      kind_);
}

Vec3 AnalyticSurface::implicit_gradient(const Vec3& p) const {
  return std::visit(
      overloaded{
          [&](const Sphere&) -> Vec3 { return 2.0 * p; },
          [&](const Torus& s) -> Vec3 {
            const double R2 = s.major_radius * s.major_radius;
            const double t = p.squaredNorm() + R2 - s.minor_radius * s.minor_radius;
            return 4.0 * t * p - 8.0 * R2 * Vec3(p.x(), p.y(), 0.0);
          },
          [&](const Ellipsoid& s) -> Vec3 {
            return {2.0 * p.x() / (s.a * s.a), 2.0 * p.y() / (s.b * s.b),
                    2.0 * p.z() / (s.c * s.c)};
          },
          [&](const RedBloodCell& s) -> Vec3 {
            const double t = (p.x() * p.x() + p.y() * p.y()) / (s.radius * s.radius);
            const double dg = rbc_g(s, t).dg;
            return {-2.0 * p.x() * dg, -2.0 * p.y() * dg, 2.0 * p.z()};
          },
          [&](const PerturbedTorus& s) -> Vec3 {
            const double phi = std::atan2(p.y(), p.x());
            const double rho = std::hypot(p.x(), p.y());
            const double r = s.minor_radius * (1.0 + s.eps * std::cos(s.modes * phi));
            const double dr = -s.minor_radius * s.eps * s.modes * std::sin(s.modes * phi);
            const double rho2 = rho * rho;
            return Vec3(2.0 * (rho - s.major_radius) * p.x() / rho + 2.0 * r * dr * p.y() / rho2,
                        2.0 * (rho - s.major_radius) * p.y() / rho - 2.0 * r * dr * p.x() / rho2,
                        2.0 * p.z());
          }},
      kind_);
}

Vec3 AnalyticSurface::torus_point(double phi, double theta) const {
  if (const auto* t = std::get_if<Torus>(&kind_)) {
    const double rho = t->major_radius + t->minor_radius * std::cos(theta);
    return {rho * std::cos(phi), rho * std::sin(phi), t->minor_radius * std::sin(theta)};
  }
  if (const auto* t = std::get_if<PerturbedTorus>(&kind_)) {
    return perturbed_torus_derivs(*t, phi, theta).X;
  }
  throw Error("torus_point: surface '" + name() + "' is not a torus");
}

Vec3 AnalyticSurface::project(const Vec3& p) const {
  return std::visit(overloaded{[&](const Sphere& s) -> Vec3 {
                                 const double n = p.norm();
                                 if (!(n > 0.0)) {
                                   throw ProjectionError("projection: origin has no radial projection");
                                 }
                                 return p * (s.radius / n);
                               },
                               [&](const PerturbedTorus& s) -> Vec3 {
                                 const auto [phi, theta] = torus_angles(p, s.major_radius);
                                 return perturbed_torus_derivs(s, phi, theta).X;
                               },
                               [&](const auto&) -> Vec3 { return newton_project(*this, p); }},
                    kind_);
}

ExactFields AnalyticSurface::exact_fields(const Vec3& p_in) const {
  Vec3 p;
  try {
    p = project(p_in);
  } catch (const ProjectionError&) {
    throw OffSurfaceError("exact_fields: point has no closest point on the surface");
  }
  if ((p - p_in).norm() > surfaces::kOffSurfaceTolerance) {
    throw OffSurfaceError("exact_fields: point is off the surface by " +
                          std::to_string((p - p_in).norm()));
  }
  return std::visit(
      overloaded{
          [&](const Sphere& s) {
            ExactFields f;
            f.nu = p / p.norm();
            f.A = (Mat3::Identity() - f.nu * f.nu.transpose()) / s.radius;
            f.H = 2.0 / s.radius;
            surfaces::complete_invariants(f);
            f.K = 1.0 / (s.radius * s.radius);
            f.Q = 0.0;
            f.V = 0.0;
            f.z = Vec3::Zero();
            return f;
          },
          [&](const Torus& s) { return torus_fields(s, p); },
          [&](const Ellipsoid& s) {
            const Mat3 hess =
                Vec3(2.0 / (s.a * s.a), 2.0 / (s.b * s.b), 2.0 / (s.c * s.c)).asDiagonal();
            return surfaces::implicit_fields(implicit_gradient(p), hess);
          },
          [&](const RedBloodCell& s) {
            const double R2 = s.radius * s.radius;
            const double t = (p.x() * p.x() + p.y() * p.y()) / R2;
            const RbcG g = rbc_g(s, t);
            Mat3 hess = Mat3::Zero();
            hess(0, 0) = -2.0 * g.dg - 4.0 * p.x() * p.x() * g.ddg / R2;
            hess(1, 1) = -2.0 * g.dg - 4.0 * p.y() * p.y() * g.ddg / R2;
            hess(0, 1) = hess(1, 0) = -4.0 * p.x() * p.y() * g.ddg / R2;
            hess(2, 2) = 2.0;
            return surfaces::implicit_fields(implicit_gradient(p), hess);
          },
          [&](const PerturbedTorus& s) {
            const auto [phi, theta] = torus_angles(p, s.major_radius);
            const PerturbedDerivs d = perturbed_torus_derivs(s, phi, theta);
            return surfaces::parametric_fields(d.Xu, d.Xv, d.Xuu, d.Xuv, d.Xvv);
          }},
      kind_);
}

Vec3 AnalyticSurface::from_unit_sphere(const Vec3& s) const {
  return std::visit(overloaded{[&](const Sphere& k) -> Vec3 { return k.radius * s; },
                               [&](const Ellipsoid& k) -> Vec3 {
                                 return {k.a * s.x(), k.b * s.y(), k.c * s.z()};
                               },
                               [&](const RedBloodCell& k) -> Vec3 {
                                 const double t = s.x() * s.x() + s.y() * s.y();
                                 return k.radius * Vec3(s.x(), s.y(), s.z() * rbc_profile(k, t));
                               },
                               [&](const auto&) -> Vec3 {
                                 throw Error("from_unit_sphere: surface '" + name() +
                                             "' is not of sphere type");
                               }},
                    kind_);
}

std::optional<double> AnalyticSurface::exact_area() const {
  if (const auto* s = std::get_if<Sphere>(&kind_)) return 4.0 * kPi * s->radius * s->radius;
  if (const auto* t = std::get_if<Torus>(&kind_)) {
    return 4.0 * kPi * kPi * t->major_radius * t->minor_radius;
  }
  return std::nullopt;
}

}  // namespace willmore
