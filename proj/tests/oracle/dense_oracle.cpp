#include "dense_oracle.hpp"

#include <cmath>

namespace oracle {

using willmore::Mat3;
using willmore::Vec2;
using willmore::Vec3;
using willmore::VectorX;

namespace {

// Monomials xi^p eta^q with p + q <= k, in a fixed order.
std::vector<std::pair<int, int>> exponents(int k) {
  std::vector<std::pair<int, int>> e;
  for (int d = 0; d <= k; ++d) {
    for (int q = 0; q <= d; ++q) e.emplace_back(d - q, q);
  }
  return e;
}

double ipow(double x, int p) { return p == 0 ? 1.0 : std::pow(x, p); }

Vec3 node3(const VectorX& v, int N, int j) { return {v[j], v[N + j], v[2 * N + j]}; }

}  // namespace

VandermondeBasis::VandermondeBasis(int degree, const std::vector<Vec2>& nodes) : degree_(degree) {
  const auto ex = exponents(degree);
  const int n = static_cast<int>(ex.size());
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < n; ++m) V(i, m) = ipow(nodes[i][0], ex[m].first) * ipow(nodes[i][1], ex[m].second);
  }
  coeff_ = V.inverse();
}

void VandermondeBasis::evaluate(const Vec2& xi, Eigen::VectorXd& values, Eigen::MatrixXd& gradients) const {
  const auto ex = exponents(degree_);
  const int n = static_cast<int>(ex.size());
  Eigen::VectorXd m(n), mx(n), my(n);
  for (int i = 0; i < n; ++i) {
    const auto [p, q] = ex[i];
    m[i] = ipow(xi[0], p) * ipow(xi[1], q);
    mx[i] = p == 0 ? 0.0 : p * ipow(xi[0], p - 1) * ipow(xi[1], q);
    my[i] = q == 0 ? 0.0 : q * ipow(xi[0], p) * ipow(xi[1], q - 1);
  }
  values = coeff_.transpose() * m;
  gradients.resize(n, 2);
  gradients.col(0) = coeff_.transpose() * mx;
  gradients.col(1) = coeff_.transpose() * my;
}

DenseBlocks assemble(const willmore::SurfaceMesh& mesh, const VectorX& x, const VectorX& u) {
  const int N = mesh.node_count();
  const auto& ref = mesh.reference();
  const VandermondeBasis basis(ref.degree(), ref.nodes());
  const auto& rule = ref.quadrature();
  const int nloc = ref.node_count();

  DenseBlocks B;
  B.M = Eigen::MatrixXd::Zero(N, N);
  B.A = Eigen::MatrixXd::Zero(N, N);
  B.F1 = Eigen::MatrixXd::Zero(N, N);
  B.F2 = Eigen::MatrixXd::Zero(3 * N, 3 * N);
  B.f2 = Eigen::VectorXd::Zero(3 * N);
  B.g1 = Eigen::VectorXd::Zero(N);
  B.g2 = Eigen::VectorXd::Zero(3 * N);

  Eigen::VectorXd phi;
  Eigen::MatrixXd dphi;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto el = mesh.element(e);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      basis.evaluate(rule.points[q], phi, dphi);

      // parametric derivatives of position, normal field and H
      Eigen::Matrix<double, 3, 2> J = Eigen::Matrix<double, 3, 2>::Zero();
      Eigen::Matrix<double, 3, 2> Dnu = Eigen::Matrix<double, 3, 2>::Zero();
      Eigen::RowVector2d DH = Eigen::RowVector2d::Zero();
      double H = 0.0;
      Vec3 nu = Vec3::Zero();
      for (int a = 0; a < nloc; ++a) {
        const int j = el[a];
        const Vec3 xa = node3(x, N, j);
        const Vec3 na(u[N + j], u[2 * N + j], u[3 * N + j]);
        J += xa * dphi.row(a);
        Dnu += na * dphi.row(a);
        DH += u[j] * dphi.row(a);
        H += u[j] * phi[a];
        nu += na * phi[a];
      }
      const Eigen::Matrix2d G = J.transpose() * J;
      const Eigen::Matrix2d Ginv = G.inverse();
      const double dA = rule.weights[q] * std::sqrt(G.determinant());
      // tangential gradient of a scalar with parametric derivative d: J G^-1 d^T
      const Eigen::Matrix<double, 3, 2> P = J * Ginv;
      Eigen::MatrixXd grad(3, nloc);
      for (int a = 0; a < nloc; ++a) grad.col(a) = P * dphi.row(a).transpose();
      const Vec3 gradH = P * DH.transpose();
      // (grad nu)_{ij} = D_i nu_j
      const Mat3 Gnu = P * Dnu.transpose();
      const Mat3 Aw = 0.5 * (Gnu + Gnu.transpose());
      const double absA2 = (Aw.array() * Aw.array()).sum();
      const double Q = -0.5 * H * H * H + absA2 * H;
      const Mat3 C = H * Aw - Aw * Aw;

      for (int a = 0; a < nloc; ++a) {
        const int i = el[a];
        for (int b = 0; b < nloc; ++b) {
          const int j = el[b];
          B.M(i, j) += dA * phi[a] * phi[b];
          B.A(i, j) += dA * grad.col(a).dot(grad.col(b));
          B.F1(i, j) -= dA * absA2 * phi[a] * phi[b];
          for (int l = 0; l < 3; ++l) {
            for (int m = 0; m < 3; ++m) B.F2(l * N + i, m * N + j) += dA * C(l, m) * phi[a] * phi[b];
          }
        }
        B.g1[i] += dA * Q * phi[a];
        for (int l = 0; l < 3; ++l) {
          // test function phi_a e_l
          const double smooth = gradH.squaredNorm() * nu[l] + (Aw * Aw * gradH)[l];
          const double coupling = 2.0 * (Aw * gradH).dot(grad.col(a)) * nu[l];
          const double divergence = Q * grad(l, a);
          B.f2[l * N + i] += dA * (smooth * phi[a] + coupling + divergence - Q * H * nu[l] * phi[a]);
          B.g2[l * N + i] += dA * absA2 * nu[l] * phi[a];
        }
      }
    }
  }
  return B;
}

void assemble_p1_closed_form(const willmore::SurfaceMesh& mesh, const VectorX& x, Eigen::MatrixXd& M,
                             Eigen::MatrixXd& A) {
  const int N = mesh.node_count();
  M = Eigen::MatrixXd::Zero(N, N);
  A = Eigen::MatrixXd::Zero(N, N);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto c = mesh.corners(e);
    const Vec3 p[3] = {node3(x, N, c[0]), node3(x, N, c[1]), node3(x, N, c[2])};
    const double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) M(c[a], c[b]) += area / 12.0 * (a == b ? 2.0 : 1.0);
    }
    // edge opposite to corner k has weight cot(angle at k) / 2
    for (int k = 0; k < 3; ++k) {
      const int a = (k + 1) % 3, b = (k + 2) % 3;
      const Vec3 ea = p[a] - p[k], eb = p[b] - p[k];
      const double cot = ea.dot(eb) / ea.cross(eb).norm();
      A(c[a], c[b]) -= 0.5 * cot;
      A(c[b], c[a]) -= 0.5 * cot;
      A(c[a], c[a]) += 0.5 * cot;
      A(c[b], c[b]) += 0.5 * cot;
    }
  }
}

}  // namespace oracle
