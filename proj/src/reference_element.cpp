#include "willmore/reference_element.hpp"

#include <cmath>
#include <numbers>

namespace willmore {

namespace {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * t * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

QuadratureRule collapsed_gauss(int order) {
  const int n = (order + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre_01(n, x, w);
  QuadratureRule rule;
  rule.order = order;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = x[i];
      rule.points.emplace_back(u, x[j] * (1.0 - u));
      rule.weights.push_back(w[i] * w[j] * (1.0 - u));
    }
  }
  return rule;
}

void add_orbit3(QuadratureRule& rule, double a, double weight) {
  const double b = 1.0 - 2.0 * a;
  rule.points.emplace_back(a, a);
  rule.points.emplace_back(b, a);
  rule.points.emplace_back(a, b);
  for (int i = 0; i < 3; ++i) rule.weights.push_back(0.5 * weight);
}

void add_orbit6(QuadratureRule& rule, double a, double b, double weight) {
  const double c = 1.0 - a - b;
  const double p[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
  for (const auto& q : p) {
    rule.points.emplace_back(q[0], q[1]);
    rule.weights.push_back(0.5 * weight);
  }
}

// Strang-Fix 12-point rule, degree 6.
QuadratureRule strang_fix_12() {
  QuadratureRule rule;
  rule.order = 6;
  add_orbit3(rule, 0.063089014491502228, 0.050844906370206817);
  add_orbit3(rule, 0.249286745170910421, 0.116786275726379366);
  add_orbit6(rule, 0.053145049844816947, 0.310352451033784405, 0.082851075618373575);
  return rule;
}

double lagrange_factor(int n, int k, double lambda, double* derivative) {
  // prod_{a<n} (k lambda - a) / (a + 1) and its derivative in lambda.
  double value = 1.0, d = 0.0;
  for (int a = 0; a < n; ++a) {
    const double f = (k * lambda - a) / (a + 1.0);
    const double df = k / (a + 1.0);
    d = d * f + value * df;
    value *= f;
  }
  *derivative = d;
  return value;
}

}  // namespace

QuadratureRule triangle_quadrature(int order) {
  if (order < 1) throw Error("quadrature order must be >= 1");
  if (order == 1) {
    QuadratureRule rule;
    rule.order = 1;
    rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
    rule.weights.push_back(0.5);
    return rule;
  }
  if (order == 2) {
    QuadratureRule rule;
    rule.order = 2;
    add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
    return rule;
  }
  if (order == 6) return strang_fix_12();
  return collapsed_gauss(order);
}

ReferenceElement::ReferenceElement(int degree, int quad_order) : degree_(degree) {
  if (degree < 1 || degree > 4) {
    throw Error("unsupported element degree " + std::to_string(degree) + " (expected 1..4)");
  }
  const int k = degree;
  lattice_.push_back({0, 0});
  lattice_.push_back({k, 0});
  lattice_.push_back({0, k});
  for (int t = 1; t < k; ++t) lattice_.push_back({t, 0});
  for (int t = 1; t < k; ++t) lattice_.push_back({k - t, t});
  for (int t = 1; t < k; ++t) lattice_.push_back({0, k - t});
  for (int i = 1; i < k; ++i) {
    for (int j = 1; i + j < k; ++j) lattice_.push_back({i, j});
  }
  for (const auto& ij : lattice_) nodes_.emplace_back(double(ij[0]) / k, double(ij[1]) / k);

  quad_ = triangle_quadrature(quad_order);
  const int n = node_count();
  values_.resize(quad_.points.size() * n);
  gradients_.resize(quad_.points.size() * n);
  for (int q = 0; q < quad_size(); ++q) {
    evaluate(quad_.points[q], &values_[q * n], &gradients_[q * n]);
  }
}

void ReferenceElement::evaluate(const Vec2& xi, double* values, Vec2* gradients) const {
  const int k = degree_;
  const double l1 = xi[0], l2 = xi[1], l0 = 1.0 - xi[0] - xi[1];
  for (std::size_t a = 0; a < lattice_.size(); ++a) {
    const int i = lattice_[a][0], j = lattice_[a][1], l = k - i - j;
    double d0, d1, d2;
    const double f0 = lagrange_factor(l, k, l0, &d0);
    const double f1 = lagrange_factor(i, k, l1, &d1);
    const double f2 = lagrange_factor(j, k, l2, &d2);
    if (values) values[a] = f0 * f1 * f2;
    if (gradients) {
      gradients[a] = Vec2(-d0 * f1 * f2 + f0 * d1 * f2, -d0 * f1 * f2 + f0 * f1 * d2);
    }
  }
}

ReferenceElement build_reference(int degree, int quad_order) {
  if (quad_order < 2 * degree + 2) {
    throw Error("quadrature order " + std::to_string(quad_order) + " below 2k+2 for degree " +
                std::to_string(degree));
  }
  return ReferenceElement(degree, quad_order);
}

}  // namespace willmore
