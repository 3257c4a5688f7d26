#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <stdexcept>
#include <string>

namespace willmore {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VectorX = Eigen::VectorXd;

/// Nodal vectors are stored component-major: component `c` of node `j`
/// lives at index `j + c * N`.
inline Vec3 node_vec3(const VectorX& v, Eigen::Index n_nodes, Eigen::Index j) {
  return {v[j], v[j + n_nodes], v[j + 2 * n_nodes]};
}

inline void set_node_vec3(VectorX& v, Eigen::Index n_nodes, Eigen::Index j, const Vec3& value) {
  v[j] = value[0];
  v[j + n_nodes] = value[1];
  v[j + 2 * n_nodes] = value[2];
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProjectionError : public Error {
 public:
  using Error::Error;
};

class OffSurfaceError : public Error {
 public:
  using Error::Error;
};

class UnavailableFieldError : public Error {
 public:
  using Error::Error;
};

class DegenerateElementError : public Error {
 public:
  DegenerateElementError(int element, const std::string& what)
      : Error("degenerate element " + std::to_string(element) + ": " + what), element_(element) {}
  int element() const { return element_; }

 private:
  int element_;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class MeshFormatError : public Error {
 public:
  MeshFormatError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace willmore
