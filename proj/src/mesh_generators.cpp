#include "willmore/mesh_generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace willmore {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SurfaceMesh map_unit_sphere_mesh(const AnalyticSurface& surface, const std::vector<Vec3>& vertices,
                                 const std::vector<std::array<int, 3>>& triangles, int degree) {
  if (!surface.is_genus_zero()) {
    throw MeshError("sphere-based generator needs a genus-zero surface, got '" + surface.name() + "'");
  }
  auto place = [&](const std::array<int, 3>& c, const Vec3& bary) -> Vec3 {
    return (bary[0] * vertices[c[0]] + bary[1] * vertices[c[1]] + bary[2] * vertices[c[2]]).normalized();
  };
  const SurfaceMesh unit = elevate_degree(vertices, triangles, degree, place);
  VectorX x(unit.positions().size());
  const int N = unit.node_count();
  for (int j = 0; j < N; ++j) set_node_vec3(x, N, j, surface.from_unit_sphere(unit.node(j)));
  return unit.with_positions(std::move(x));
}

}  // namespace

void icosahedron(std::vector<Vec3>& vertices, std::vector<std::array<int, 3>>& triangles) {
  const double g = 0.5 * (1.0 + std::sqrt(5.0));
  vertices.clear();
  triangles.clear();
  for (double s1 : {-1.0, 1.0}) {
    for (double s2 : {-1.0, 1.0}) {
      vertices.emplace_back(0.0, s1, s2 * g);
      vertices.emplace_back(s1, s2 * g, 0.0);
      vertices.emplace_back(s2 * g, 0.0, s1);
    }
  }
  for (auto& v : vertices) v.normalize();
  // Faces are the triples of mutually adjacent vertices (edge length 2 before
  // normalisation), oriented outward.
  double min_dist = 1e9;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      min_dist = std::min(min_dist, (vertices[i] - vertices[j]).norm());
    }
  }
  auto adjacent = [&](int a, int b) { return (vertices[a] - vertices[b]).norm() < 1.01 * min_dist; };
  const int n = static_cast<int>(vertices.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        if (!adjacent(a, b) || !adjacent(b, c) || !adjacent(a, c)) continue;
        const Vec3 normal = (vertices[b] - vertices[a]).cross(vertices[c] - vertices[a]);
        if (normal.dot(vertices[a] + vertices[b] + vertices[c]) > 0.0) {
          triangles.push_back({a, b, c});
        } else {
          triangles.push_back({a, c, b});
        }
      }
    }
  }
}

SurfaceMesh gen_sphere_mesh(const AnalyticSurface& surface, int subdivisions, int degree) {
  if (subdivisions < 0) throw MeshError("subdivisions must be >= 0");
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> t;
  icosahedron(v, t);
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(4 * t.size());
    for (const auto& [a, b, c] : t) {
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      refined.push_back({a, ab, ca});
      refined.push_back({b, bc, ab});
      refined.push_back({c, ca, bc});
      refined.push_back({ab, bc, ca});
    }
    t = std::move(refined);
  }
  return map_unit_sphere_mesh(surface, v, t, degree);
}

SurfaceMesh gen_geodesic_sphere(const AnalyticSurface& surface, int frequency, int degree) {
  if (frequency < 1) throw MeshError("frequency must be >= 1");
  std::vector<Vec3> ico;
  std::vector<std::array<int, 3>> faces;
  icosahedron(ico, faces);
  const int n = frequency;

  // A lattice point is identified by its integer barycentric weights on the
  // icosahedron corners, which makes points on shared edges coincide.
  using Key = std::vector<std::pair<int, int>>;
  std::map<Key, int> ids;
  std::vector<Vec3> vertices;
  auto point = [&](const std::array<int, 3>& f, int i, int j) {
    const int w[3] = {n - i - j, i, j};
    Key key;
    for (int c = 0; c < 3; ++c) {
      if (w[c] != 0) key.emplace_back(f[c], w[c]);
    }
    std::sort(key.begin(), key.end());
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    Vec3 p = Vec3::Zero();
    for (int c = 0; c < 3; ++c) p += (double(w[c]) / n) * ico[f[c]];
    vertices.push_back(p.normalized());
    const int id = static_cast<int>(vertices.size()) - 1;
    ids.emplace(std::move(key), id);
    return id;
  };

  std::vector<std::array<int, 3>> tris;
  for (const auto& f : faces) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; i + j < n; ++j) {
        tris.push_back({point(f, i, j), point(f, i + 1, j), point(f, i, j + 1)});
        if (i + j + 2 <= n) {
          tris.push_back({point(f, i + 1, j), point(f, i + 1, j + 1), point(f, i, j + 1)});
        }
      }
    }
  }
  return map_unit_sphere_mesh(surface, vertices, tris, degree);
}

double graded_minor_angle(double s, double grading) {
  const double a = (grading - 1.0) / (grading + 1.0);
  // theta = pi is the inner equator, where d theta / ds is smallest
  return kTwoPi * s + a * std::sin(kTwoPi * s);
}

SurfaceMesh gen_torus_mesh(const AnalyticSurface& surface, int n_major, int n_minor, double grading,
                           int degree) {
  if (n_major < 4 || n_minor < 4) throw MeshError("torus grid needs n_major, n_minor >= 4");
  if (!(grading >= 1.0)) throw MeshError("torus grading ratio must be >= 1");
  const int k = degree;
  const int FI = k * n_major, FJ = k * n_minor;

  // Fine lattice node ids: corners first.
  std::vector<int> id(static_cast<std::size_t>(FI) * FJ, -1);
  int next = 0;
  for (int I = 0; I < FI; I += k) {
    for (int J = 0; J < FJ; J += k) id[I * FJ + J] = next++;
  }
  const int n_vertices = next;
  for (int I = 0; I < FI; ++I) {
    for (int J = 0; J < FJ; ++J) {
      if (id[I * FJ + J] < 0) id[I * FJ + J] = next++;
    }
  }
  const int N = next;
  VectorX x(3 * N);
  for (int I = 0; I < FI; ++I) {
    for (int J = 0; J < FJ; ++J) {
      const double phi = kTwoPi * I / FI;
      const double theta = graded_minor_angle(double(J) / FJ, grading);
      set_node_vec3(x, N, id[I * FJ + J], surface.torus_point(phi, theta));
    }
  }

  const ReferenceElement ref(k, 2 * k + 2);
  std::vector<int> conn;
  conn.reserve(static_cast<std::size_t>(2) * n_major * n_minor * ref.node_count());
  auto emit = [&](int I0, int J0, int d1i, int d1j, int d2i, int d2j) {
    for (const auto& ab : ref.lattice()) {
      const int I = (I0 + ab[0] * d1i + ab[1] * d2i) % FI;
      const int J = (J0 + ab[0] * d1j + ab[1] * d2j) % FJ;
      conn.push_back(id[I * FJ + J]);
    }
  };
  for (int i = 0; i < n_major; ++i) {
    for (int j = 0; j < n_minor; ++j) {
      emit(k * i, k * j, 1, 0, 1, 1);
      emit(k * i, k * j, 1, 1, 0, 1);
    }
  }
  return SurfaceMesh(k, N, n_vertices, std::move(conn), std::move(x));
}

}  // namespace willmore
