#pragma once

#include "willmore/mesh.hpp"
#include "willmore/surfaces.hpp"

namespace willmore {

/// Unit icosahedron: 12 vertices, 20 outward-oriented faces.
void icosahedron(std::vector<Vec3>& vertices, std::vector<std::array<int, 3>>& triangles);

/// Recursively subdivided icosahedron (1 -> 4 splits, midpoints pushed to
/// the sphere), then raised to degree k with nodes on the sphere. The
/// surface must be genus zero; nodes are mapped through
/// AnalyticSurface::from_unit_sphere.
SurfaceMesh gen_sphere_mesh(const AnalyticSurface& surface, int subdivisions, int degree = 2);

/// Geodesic sphere of the given frequency: every icosahedron face is split
/// into frequency^2 flat triangles whose nodes are pushed to the sphere.
/// Gives a continuous range of resolutions (N = 10 n^2 k^2 + 2 nodes).
SurfaceMesh gen_geodesic_sphere(const AnalyticSurface& surface, int frequency, int degree = 2);

/// Structured periodic torus grid. With grading > 1 the minor angle is
///   theta(s) = 2 pi s + a sin(2 pi s),  a = (grading - 1) / (grading + 1),
/// so the spacing at the outer equator is `grading` times the spacing at the
/// inner equator. High-order nodes sit at parameter-space positions.
SurfaceMesh gen_torus_mesh(const AnalyticSurface& surface, int n_major, int n_minor,
                           double grading = 1.0, int degree = 2);

/// Minor-angle grading map used by gen_torus_mesh.
double graded_minor_angle(double s, double grading);

}  // namespace willmore
