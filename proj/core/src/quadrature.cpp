#include "tpsfem/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "tpsfem/errors.hpp"

namespace tpsfem {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
// recurrence matrix, weights are mu0 times the squared first components of
// the normalized eigenvectors.
Rule1D golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag_sq,
                    double mu0) {
  const int k = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) J(i, i) = diag[i];
  for (int i = 1; i < k; ++i) {
    const double b = std::sqrt(offdiag_sq[i]);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule1D rule;
  rule.nodes.resize(k);
  rule.weights.resize(k);
  for (int i = 0; i < k; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

Rule1D gauss_legendre(int k) {
  if (k < 1) throw InvalidArgument("gauss rule needs at least one point");
  std::vector<double> a(k, 0.0), b(k, 0.0);
  for (int i = 1; i < k; ++i) {
    b[i] = static_cast<double>(i) * i / (4.0 * i * i - 1.0);
  }
  return golub_welsch(a, b, 2.0);
}

Rule1D gauss_jacobi10(int k) {
  if (k < 1) throw InvalidArgument("gauss rule needs at least one point");
  std::vector<double> a(k, 0.0), b(k, 0.0);
  for (int i = 0; i < k; ++i) {
    a[i] = -1.0 / ((2.0 * i + 1.0) * (2.0 * i + 3.0));
    if (i >= 1) b[i] = i * (i + 1.0) / ((2.0 * i + 1.0) * (2.0 * i + 1.0));
  }
  return golub_welsch(a, b, 2.0);
}

TriangleRule midpoint_rule() {
  TriangleRule rule;
  rule.points = {Point2{0.5, 0.0}, Point2{0.5, 0.5}, Point2{0.0, 0.5}};
  rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  return rule;
}

TriangleRule conical_rule(int k) {
  // Duffy substitution x = (1-y) * xi collapses the triangle to a square;
  // the factor (1-y) becomes the Jacobi weight in the y direction.
  const Rule1D gl = gauss_legendre(k);
  const Rule1D gj = gauss_jacobi10(k);
  TriangleRule rule;
  rule.points.reserve(k * k);
  rule.weights.reserve(k * k);
  for (int i = 0; i < k; ++i) {
    const double y = 0.5 * (1.0 + gj.nodes[i]);
    const double wy = 0.25 * gj.weights[i];
    for (int j = 0; j < k; ++j) {
      const double xi = 0.5 * (1.0 + gl.nodes[j]);
      const double wx = 0.5 * gl.weights[j];
      rule.points.push_back(Point2{(1.0 - y) * xi, y});
      rule.weights.push_back(wy * wx);
    }
  }
  return rule;
}

TriangleRule triangle_rule(int degree) {
  if (degree < 0) throw InvalidArgument("quadrature degree must be >= 0");
  if (degree <= 2) return midpoint_rule();
  return conical_rule((degree + 2) / 2);
}

}  // namespace tpsfem
