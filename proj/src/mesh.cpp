#include "willmore/mesh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>

#include "willmore/surfaces.hpp"

namespace willmore {

SurfaceMesh::SurfaceMesh(int degree, int n_nodes, int n_vertices, std::vector<int> connectivity,
                         VectorX positions, int quad_order)
    : n_nodes_(n_nodes),
      n_vertices_(n_vertices),
      connectivity_(std::move(connectivity)),
      x_(std::move(positions)),
      ref_(std::make_shared<ReferenceElement>(
          build_reference(degree, quad_order > 0 ? quad_order : 2 * degree + 2))) {
  if (x_.size() != 3 * static_cast<Eigen::Index>(n_nodes_)) {
    throw MeshError("position vector has size " + std::to_string(x_.size()) + ", expected 3N = " +
                    std::to_string(3 * n_nodes_));
  }
  if (connectivity_.size() % ref_->node_count() != 0) {
    throw MeshError("connectivity size is not a multiple of the element node count");
  }
  for (int id : connectivity_) {
    if (id < 0 || id >= n_nodes_) throw MeshError("connectivity references node " + std::to_string(id));
  }
}

SurfaceMesh SurfaceMesh::with_positions(VectorX positions) const {
  SurfaceMesh copy = *this;
  if (positions.size() != x_.size()) throw MeshError("with_positions: size mismatch");
  copy.x_ = std::move(positions);
  return copy;
}

SurfaceMesh SurfaceMesh::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_nodes_) throw MeshError("permutation size mismatch");
  SurfaceMesh copy = *this;
  for (int& id : copy.connectivity_) id = perm[id];
  for (int j = 0; j < n_nodes_; ++j) set_node_vec3(copy.x_, n_nodes_, perm[j], node(j));
  return copy;
}

double ElementGeometry::measure() const {
  return std::accumulate(weight.begin(), weight.end(), 0.0);
}

void compute_element_geometry(const SurfaceMesh& mesh, const VectorX& x, int element,
                              ElementGeometry& out) {
  const ReferenceElement& ref = mesh.reference();
  const int nq = ref.quad_size();
  const int nloc = ref.node_count();
  const int N = mesh.node_count();
  const auto nodes = mesh.element(element);

  out.quad_count = nq;
  out.node_count = nloc;
  out.position.resize(nq);
  out.weight.resize(nq);
  out.metric_det.resize(nq);
  out.gradient.resize(static_cast<std::size_t>(nq) * nloc);

  Eigen::Matrix<double, 3, Eigen::Dynamic> X(3, nloc);
  for (int a = 0; a < nloc; ++a) X.col(a) = node_vec3(x, N, nodes[a]);

  for (int q = 0; q < nq; ++q) {
    Eigen::Matrix<double, 3, 2> J = Eigen::Matrix<double, 3, 2>::Zero();
    Vec3 p = Vec3::Zero();
    for (int a = 0; a < nloc; ++a) {
      const Vec2& g = ref.gradient(q, a);
      J.col(0) += X.col(a) * g[0];
      J.col(1) += X.col(a) * g[1];
      p += X.col(a) * ref.value(q, a);
    }
    const double g00 = J.col(0).squaredNorm();
    const double g01 = J.col(0).dot(J.col(1));
    const double g11 = J.col(1).squaredNorm();
    const double det = g00 * g11 - g01 * g01;
    if (!(det > 0.0)) {
      throw DegenerateElementError(element, "metric determinant " + std::to_string(det) +
                                                " at quadrature point " + std::to_string(q));
    }
    // J G^{-1}: columns are the contravariant tangent vectors.
    const Vec3 t0 = (g11 * J.col(0) - g01 * J.col(1)) / det;
    const Vec3 t1 = (g00 * J.col(1) - g01 * J.col(0)) / det;
    out.position[q] = p;
    out.metric_det[q] = det;
    out.weight[q] = ref.quadrature().weights[q] * std::sqrt(det);
    for (int a = 0; a < nloc; ++a) {
      const Vec2& g = ref.gradient(q, a);
      out.gradient[q * nloc + a] = t0 * g[0] + t1 * g[1];
    }
  }
}

ElementGeometry element_geometry(const SurfaceMesh& mesh, const VectorX& x, int element) {
  ElementGeometry g;
  compute_element_geometry(mesh, x, element, g);
  return g;
}

void check_closed_oriented(const SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto c = mesh.corners(e);
    for (int i = 0; i < 3; ++i) {
      const int a = c[i], b = c[(i + 1) % 3];
      if (a == b) throw MeshError("closed-mesh violation: element " + std::to_string(e) + " repeats a corner");
      if (++directed[{a, b}] > 1) {
        throw MeshError("closed-mesh violation: edge (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") traversed twice in the same direction (non-manifold or inconsistent orientation)");
      }
    }
  }
  for (const auto& [edge, count] : directed) {
    (void)count;
    if (!directed.contains({edge.second, edge.first})) {
      throw MeshError("closed-mesh violation: edge (" + std::to_string(edge.first) + ", " +
                      std::to_string(edge.second) + ") has no opposite neighbour");
    }
  }
}

double mesh_width(const SurfaceMesh& mesh, const VectorX& x) {
  double h = 0.0;
  const int N = mesh.node_count();
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto c = mesh.corners(e);
    for (int i = 0; i < 3; ++i) {
      h = std::max(h, (node_vec3(x, N, c[i]) - node_vec3(x, N, c[(i + 1) % 3])).norm());
    }
  }
  return h;
}

double mesh_width(const SurfaceMesh& mesh) { return mesh_width(mesh, mesh.positions()); }

std::vector<double> min_metric_determinants(const SurfaceMesh& mesh, const VectorX& x) {
  std::vector<double> out(mesh.element_count());
  ElementGeometry g;
  for (int e = 0; e < mesh.element_count(); ++e) {
    compute_element_geometry(mesh, x, e, g);
    out[e] = *std::min_element(g.metric_det.begin(), g.metric_det.end());
  }
  return out;
}

SurfaceMesh elevate_degree(const std::vector<Vec3>& vertices,
                           const std::vector<std::array<int, 3>>& triangles, int degree,
                           const NodePlacer& place, int quad_order) {
  const ReferenceElement ref(degree, 2 * degree + 2);
  const int k = degree;
  const int nloc = ref.node_count();
  const int nv = static_cast<int>(vertices.size());

  std::vector<Vec3> nodes(vertices);
  std::map<std::pair<int, int>, int> edge_first;  // first node id of the edge run
  std::vector<int> conn;
  conn.reserve(triangles.size() * nloc);

  auto edge_nodes = [&](const std::array<int, 3>& tri, int a, int b) {
    // returns ids of the k-1 nodes running from tri[a] to tri[b]
    const int va = tri[a], vb = tri[b];
    const auto key = std::minmax(va, vb);
    auto it = edge_first.find(key);
    if (it == edge_first.end()) {
      const int first = static_cast<int>(nodes.size());
      for (int t = 1; t < k; ++t) {
        // position measured from the smaller corner index
        const double s = double(t) / k;
        Vec3 bary = Vec3::Zero();
        const int ia = (tri[a] == key.first) ? a : b;
        const int ib = (ia == a) ? b : a;
        bary[ia] = 1.0 - s;
        bary[ib] = s;
        nodes.push_back(place(tri, bary));
      }
      it = edge_first.emplace(key, first).first;
    }
    std::vector<int> ids(k - 1);
    for (int t = 0; t < k - 1; ++t) ids[t] = it->second + t;
    if (va > vb) std::reverse(ids.begin(), ids.end());
    return ids;
  };

  for (const auto& tri : triangles) {
    conn.push_back(tri[0]);
    conn.push_back(tri[1]);
    conn.push_back(tri[2]);
    for (const auto& [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{2, 0}}) {
      for (int id : edge_nodes(tri, a, b)) conn.push_back(id);
    }
    for (int a = 3 * k; a < nloc; ++a) {
      const auto& ij = ref.lattice()[a];
      const Vec3 bary(double(k - ij[0] - ij[1]) / k, double(ij[0]) / k, double(ij[1]) / k);
      conn.push_back(static_cast<int>(nodes.size()));
      nodes.push_back(place(tri, bary));
    }
  }

  const int n = static_cast<int>(nodes.size());
  VectorX x(3 * n);
  for (int j = 0; j < n; ++j) set_node_vec3(x, n, j, nodes[j]);
  return SurfaceMesh(degree, n, nv, std::move(conn), std::move(x), quad_order);
}

std::vector<std::array<int, 3>> corner_triangles(const SurfaceMesh& mesh) {
  std::vector<std::array<int, 3>> tris(mesh.element_count());
  for (int e = 0; e < mesh.element_count(); ++e) tris[e] = mesh.corners(e);
  return tris;
}

std::vector<Vec3> vertex_positions(const SurfaceMesh& mesh) {
  std::vector<Vec3> v(mesh.vertex_count());
  for (int j = 0; j < mesh.vertex_count(); ++j) v[j] = mesh.node(j);
  return v;
}

SurfaceMesh curve_mesh(const SurfaceMesh& linear_mesh, const AnalyticSurface& surface, int degree) {
  if (linear_mesh.degree() != 1) throw MeshError("curve_mesh expects a linear mesh");
  const std::vector<Vec3> vertices = vertex_positions(linear_mesh);
  auto place = [&](const std::array<int, 3>& c, const Vec3& bary) {
    const Vec3 p = bary[0] * vertices[c[0]] + bary[1] * vertices[c[1]] + bary[2] * vertices[c[2]];
    return surface.project(p);
  };
  return elevate_degree(vertices, corner_triangles(linear_mesh), degree, place);
}

}  // namespace willmore
