#pragma once

#include <functional>
#include <vector>

#include "tpsfem/geometry.hpp"
#include "tpsfem/morley.hpp"

namespace tpsfem {

/// L2 norm of (f - reference) over the meshed domain, accumulated element
/// by element with a quadrature rule exact for polynomials of the given
/// total degree.
double error_l2(const MorleyFunction& f,
                const std::function<double(Point2)>& reference,
                int quad_degree = 12);

/// Broken H1 seminorm of (f - reference): the element-wise L2 norm of the
/// gradient difference, summed over elements.
double error_h1_broken(const MorleyFunction& f,
                       const std::function<Vec2(Point2)>& reference_gradient,
                       int quad_degree = 10);

/// Root mean square of (hat value of f - reference) over the given points.
double error_empirical(const MorleyFunction& f,
                       const std::function<double(Point2)>& reference,
                       const std::vector<Point2>& points);

/// Root mean square of the vector entries.
double empirical_norm(const std::vector<double>& values);

}  // namespace tpsfem
