#pragma once

#include "tpsfem/geometry.hpp"

namespace tpsfem {

/// Value, gradient, and Hessian of a scalar field at one point.
struct Jet2 {
  double value = 0.0;
  Vec2 gradient{};
  SymMat2 hessian{};
};

/// Built-in benchmark field sin(2*pi*x^2 + 3*pi*y) * exp(sqrt(x^3 + y)).
/// Smooth wherever x^3 + y > 0; at the origin corner of the unit square the
/// value extends continuously but the derivatives blow up.
///
/// benchmark_value is defined for x^3 + y >= 0 and throws DomainError
/// otherwise.  benchmark_gradient and benchmark_jet additionally throw
/// DomainError when x^3 + y is too small for the derivatives to be
/// representable (threshold 1e-14).
double benchmark_value(Point2 p);
Vec2 benchmark_gradient(Point2 p);
Jet2 benchmark_jet(Point2 p);

}  // namespace tpsfem
