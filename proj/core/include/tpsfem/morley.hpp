#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "tpsfem/geometry.hpp"
#include "tpsfem/mesh.hpp"

namespace tpsfem {

/// Local shape functions of one element, stored as quadratic polynomials in
/// the reference coordinates (xi, eta) = finv * (p - origin) with monomial
/// order (1, xi, eta, xi^2, xi*eta, eta^2). Shape function i is dual to local
/// degree of freedom i: values at the three vertices, then normal derivatives
/// (with respect to the global edge normals) at the three edge midpoints,
/// edge i opposite vertex i.
struct ElementBasis {
  std::array<int, 6> dofs{};
  Point2 origin;
  std::array<double, 4> finv{};  // row-major 2x2
  std::array<std::array<double, 6>, 6> coeff{};
  std::array<SymMat2, 6> hessians{};  // constant physical Hessians
  double area = 0.0;

  Point2 to_reference(Point2 p) const {
    const Vec2 d = p - origin;
    return {finv[0] * d.x + finv[1] * d.y, finv[2] * d.x + finv[3] * d.y};
  }
};

/// Quadratic nonconforming finite element space on a triangulation. Degrees
/// of freedom are function values at vertices (ids [0, V)) followed by mid
/// edge normal derivatives (ids [V, V+E)); members of the space may jump
/// across edges away from those functionals.
class MorleySpace {
 public:
  explicit MorleySpace(std::shared_ptr<const Mesh2D> mesh);

  const Mesh2D& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh2D>& mesh_ptr() const { return mesh_; }

  int dof_count() const { return mesh_->vertex_count() + mesh_->edge_count(); }
  int vertex_dof(int v) const { return v; }
  int edge_dof(int e) const { return mesh_->vertex_count() + e; }

  const ElementBasis& element_basis(int t) const { return elements_[t]; }

  /// Values of the six local shape functions at p (p need not be inside).
  std::array<double, 6> basis_values(int t, Point2 p) const;
  std::array<Vec2, 6> basis_gradients(int t, Point2 p) const;

 private:
  std::shared_ptr<const Mesh2D> mesh_;
  std::vector<ElementBasis> elements_;
};

/// A member of the space: one coefficient per global degree of freedom.
/// Vertex coefficients are function values; edge coefficients are normal
/// derivatives, in function units per length.
struct MorleyFunction {
  std::shared_ptr<const MorleySpace> space;
  std::vector<double> coeffs;
};

/// Interpolate a C^1 function: vertex values plus mid-edge normal derivatives.
MorleyFunction interpolate(std::shared_ptr<const MorleySpace> space,
                           const std::function<double(Point2)>& value,
                           const std::function<Vec2(Point2)>& gradient);

/// Value of f restricted to one element. p must lie in the element's closure.
double eval(const MorleyFunction& f, int element, Point2 p);

/// Gradient of f restricted to one element.
Vec2 eval_gradient(const MorleyFunction& f, int element, Point2 p);

/// Hessian of f on an element (constant there).
SymMat2 eval_hessian(const MorleyFunction& f, int element);

/// Pointwise evaluation rule for empirical norms: the average of the
/// one-sided values over every element whose closure contains p.
double hat_eval(const MorleyFunction& f, Point2 p);

/// Broken H2 seminorm: sqrt of the sum over elements of |K| times the
/// squared Hessian with the mixed entry counted twice.
double h2_seminorm(const MorleyFunction& f);

}  // namespace tpsfem
