#pragma once

#include <array>
#include <memory>
#include <vector>

#include "tpsfem/geometry.hpp"
#include "tpsfem/mesh.hpp"
#include "tpsfem/morley.hpp"

namespace tpsfem {

/// Quintic C^1 finite element space on a triangulation. Degrees of freedom
/// per vertex v are the value and the Cartesian derivatives up to second
/// order, ids [6v, 6v+6) in the order (value, dx, dy, dxx, dxy, dyy);
/// per edge e one mid-edge normal derivative (with respect to the global
/// edge normal), id 6V + e. Shared functionals make members C^1 across
/// edges: the trace and normal derivative on an edge are determined by the
/// functionals living on that edge alone.
class ArgyrisSpace {
 public:
  explicit ArgyrisSpace(std::shared_ptr<const Mesh2D> mesh);

  const Mesh2D& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh2D>& mesh_ptr() const { return mesh_; }

  int dof_count() const {
    return 6 * mesh_->vertex_count() + mesh_->edge_count();
  }
  int vertex_dof(int v, int derivative) const { return 6 * v + derivative; }
  int edge_dof(int e) const { return 6 * mesh_->vertex_count() + e; }

  /// Global ids of the 21 local degrees of freedom: six per vertex in local
  /// vertex order, then one per edge in local edge order.
  const std::array<int, 21>& local_dofs(int t) const {
    return elements_[t].dofs;
  }

  std::array<double, 21> basis_values(int t, Point2 p) const;
  std::array<Vec2, 21> basis_gradients(int t, Point2 p) const;
  std::array<SymMat2, 21> basis_hessians(int t, Point2 p) const;

 private:
  struct Element {
    std::array<int, 21> dofs{};
    Point2 origin;
    std::array<double, 4> finv{};  // row-major 2x2
    // coeff[i][j]: monomial j coefficient of local shape function i, in
    // reference coordinates, degree-graded monomial order.
    std::array<std::array<double, 21>, 21> coeff{};
  };

  std::shared_ptr<const Mesh2D> mesh_;
  std::vector<Element> elements_;
};

struct ArgyrisFunction {
  std::shared_ptr<const ArgyrisSpace> space;
  std::vector<double> coeffs;
};

/// C^1 rebuild of a possibly discontinuous quadratic: vertex derivatives are
/// averaged over all elements meeting the vertex, mid-edge normal derivatives
/// are carried over unchanged. The result agrees with the input wherever the
/// input is already smooth and differs by one order of the mesh size in the
/// broken norms otherwise. An existing space on the same mesh can be passed
/// to avoid rebuilding it.
ArgyrisFunction enrich(const MorleyFunction& v,
                       std::shared_ptr<const ArgyrisSpace> space = nullptr);

/// Value of f restricted to one element. p must lie in the element's closure.
double eval(const ArgyrisFunction& f, int element, Point2 p);

Vec2 eval_gradient(const ArgyrisFunction& f, int element, Point2 p);

SymMat2 eval_hessian(const ArgyrisFunction& f, int element, Point2 p);

/// Evaluation anywhere in the domain (the function is single-valued).
double eval_at(const ArgyrisFunction& f, Point2 p);

/// H2 seminorm (the function is smooth, no jumps to account for), with the
/// mixed second derivative counted twice.
double h2_seminorm(const ArgyrisFunction& f);

/// Element-wise L2 (order 0), H1 seminorm (order 1) or H2 seminorm (order 2)
/// distance between a quadratic and a quintic on the same mesh, integrated
/// exactly.
double broken_distance(const MorleyFunction& v, const ArgyrisFunction& w,
                       int order);

/// Empirical distance at the given points: the quadratic enters through its
/// pointwise evaluation rule, the quintic through its single value.
double hat_distance_n(const MorleyFunction& v, const ArgyrisFunction& w,
                      const std::vector<Point2>& points);

}  // namespace tpsfem
