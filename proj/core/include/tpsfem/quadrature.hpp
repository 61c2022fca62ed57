#pragma once

#include <vector>

#include "tpsfem/geometry.hpp"

namespace tpsfem {

/// Nodes and weights of a 1D Gauss rule on [-1, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// k-point Gauss-Legendre rule; integrates polynomials of degree 2k-1.
Rule1D gauss_legendre(int k);

/// k-point Gauss-Jacobi rule for the weight (1-x) on [-1, 1]; integrates
/// (1-x) * p(x) exactly for polynomials p of degree 2k-1.
Rule1D gauss_jacobi10(int k);

/// Quadrature rule on the reference triangle (0,0), (1,0), (0,1).
/// Weights sum to the reference area 1/2; an integral over a physical
/// triangle K is 2*|K| * sum_q w_q f(F_K(p_q)).
struct TriangleRule {
  std::vector<Point2> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Three-point rule at the edge midpoints, exact for degree 2.
TriangleRule midpoint_rule();

/// Conical-product rule with k*k points, exact for total degree 2k-1.
TriangleRule conical_rule(int k);

/// Smallest built-in rule exact for all polynomials of total degree <= degree.
TriangleRule triangle_rule(int degree);

}  // namespace tpsfem
