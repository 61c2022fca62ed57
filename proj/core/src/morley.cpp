#include "tpsfem/morley.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "tpsfem/errors.hpp"

namespace tpsfem {

namespace {

// Monomials (1, xi, eta, xi^2, xi*eta, eta^2) and their reference derivatives.
void monomials(Point2 r, std::array<double, 6>& m) {
  m = {1.0, r.x, r.y, r.x * r.x, r.x * r.y, r.y * r.y};
}

void monomial_gradients(Point2 r, std::array<double, 6>& gx, std::array<double, 6>& gy) {
  gx = {0.0, 1.0, 0.0, 2.0 * r.x, r.y, 0.0};
  gy = {0.0, 0.0, 1.0, 0.0, r.x, 2.0 * r.y};
}

}  // namespace

MorleySpace::MorleySpace(std::shared_ptr<const Mesh2D> mesh) : mesh_(std::move(mesh)) {
  const Mesh2D& m = *mesh_;
  elements_.resize(m.triangle_count());

  // Reference coordinates of the vertices and of the opposite-edge midpoints.
  static constexpr Point2 ref_vertex[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  static constexpr Point2 ref_midpoint[3] = {{0.5, 0.5}, {0.0, 0.5}, {0.5, 0.0}};

  for (int t = 0; t < m.triangle_count(); ++t) {
    ElementBasis& eb = elements_[t];
    const auto& tri = m.triangles()[t].v;
    const Point2 p0 = m.vertices()[tri[0]];
    const Vec2 c0 = m.vertices()[tri[1]] - p0;
    const Vec2 c1 = m.vertices()[tri[2]] - p0;
    const double det = cross(c0, c1);

    eb.origin = p0;
    eb.finv = {c1.y / det, -c1.x / det, -c0.y / det, c0.x / det};
    eb.area = m.area(t);
    for (int i = 0; i < 3; ++i) {
      eb.dofs[i] = vertex_dof(tri[i]);
      eb.dofs[3 + i] = edge_dof(m.tri_edges(t)[i].edge);
    }

    // DOF functionals applied to the reference monomials.
    Eigen::Matrix<double, 6, 6> dof_matrix;
    std::array<double, 6> vals, gx, gy;
    for (int i = 0; i < 3; ++i) {
      monomials(ref_vertex[i], vals);
      for (int j = 0; j < 6; ++j) dof_matrix(i, j) = vals[j];
    }
    for (int i = 0; i < 3; ++i) {
      const Vec2 n = m.edge_normal(m.tri_edges(t)[i].edge);
      monomial_gradients(ref_midpoint[i], gx, gy);
      for (int j = 0; j < 6; ++j) {
        // Physical gradient is finv^T times the reference gradient.
        const double dx = eb.finv[0] * gx[j] + eb.finv[2] * gy[j];
        const double dy = eb.finv[1] * gx[j] + eb.finv[3] * gy[j];
        dof_matrix(3 + i, j) = dx * n.x + dy * n.y;
      }
    }

    const Eigen::Matrix<double, 6, 6> coeff_cols =
        dof_matrix.fullPivLu().solve(Eigen::Matrix<double, 6, 6>::Identity());
    const double residual =
        (dof_matrix * coeff_cols - Eigen::Matrix<double, 6, 6>::Identity())
            .cwiseAbs()
            .maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-6) {
      throw IllConditionedSystem("shape function construction failed on element " +
                                 std::to_string(t));
    }

    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) eb.coeff[i][j] = coeff_cols(j, i);
      // Constant reference Hessian of basis i, pushed forward to physical
      // coordinates: H_phys = finv^T H_ref finv.
      const double hxx = 2.0 * eb.coeff[i][3];
      const double hxy = eb.coeff[i][4];
      const double hyy = 2.0 * eb.coeff[i][5];
      const double a = eb.finv[0], b = eb.finv[1], c = eb.finv[2], d = eb.finv[3];
      eb.hessians[i].xx = a * (a * hxx + c * hxy) + c * (a * hxy + c * hyy);
      eb.hessians[i].xy = b * (a * hxx + c * hxy) + d * (a * hxy + c * hyy);
      eb.hessians[i].yy = b * (b * hxx + d * hxy) + d * (b * hxy + d * hyy);
    }
  }
}

std::array<double, 6> MorleySpace::basis_values(int t, Point2 p) const {
  const ElementBasis& eb = elements_[t];
  std::array<double, 6> mono;
  monomials(eb.to_reference(p), mono);
  std::array<double, 6> values{};
  for (int i = 0; i < 6; ++i) {
    double v = 0.0;
    for (int j = 0; j < 6; ++j) v += eb.coeff[i][j] * mono[j];
    values[i] = v;
  }
  return values;
}

std::array<Vec2, 6> MorleySpace::basis_gradients(int t, Point2 p) const {
  const ElementBasis& eb = elements_[t];
  std::array<double, 6> gx, gy;
  monomial_gradients(eb.to_reference(p), gx, gy);
  std::array<Vec2, 6> grads{};
  for (int i = 0; i < 6; ++i) {
    double rx = 0.0, ry = 0.0;
    for (int j = 0; j < 6; ++j) {
      rx += eb.coeff[i][j] * gx[j];
      ry += eb.coeff[i][j] * gy[j];
    }
    grads[i] = Vec2{eb.finv[0] * rx + eb.finv[2] * ry, eb.finv[1] * rx + eb.finv[3] * ry};
  }
  return grads;
}

MorleyFunction interpolate(std::shared_ptr<const MorleySpace> space,
                           const std::function<double(Point2)>& value,
                           const std::function<Vec2(Point2)>& gradient) {
  const Mesh2D& mesh = space->mesh();
  MorleyFunction f;
  f.coeffs.assign(space->dof_count(), 0.0);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    f.coeffs[space->vertex_dof(v)] = value(mesh.vertices()[v]);
  }
  for (int e = 0; e < mesh.edge_count(); ++e) {
    f.coeffs[space->edge_dof(e)] = dot(gradient(mesh.edge_midpoint(e)), mesh.edge_normal(e));
  }
  f.space = std::move(space);
  return f;
}

namespace {

void check_inside(int element, Point2 r) {
  if (r.x < -1e-9 || r.y < -1e-9 || r.x + r.y > 1.0 + 1e-9) {
    throw InvalidArgument("point is not in the closure of element " +
                          std::to_string(element));
  }
}

}  // namespace

double eval(const MorleyFunction& f, int element, Point2 p) {
  const ElementBasis& eb = f.space->element_basis(element);
  const Point2 r = eb.to_reference(p);
  check_inside(element, r);
  std::array<double, 6> mono;
  monomials(r, mono);
  double value = 0.0;
  for (int i = 0; i < 6; ++i) {
    double basis = 0.0;
    for (int j = 0; j < 6; ++j) basis += eb.coeff[i][j] * mono[j];
    value += f.coeffs[eb.dofs[i]] * basis;
  }
  return value;
}

Vec2 eval_gradient(const MorleyFunction& f, int element, Point2 p) {
  const ElementBasis& eb = f.space->element_basis(element);
  check_inside(element, eb.to_reference(p));
  const auto grads = f.space->basis_gradients(element, p);
  Vec2 g{0.0, 0.0};
  for (int i = 0; i < 6; ++i) g = g + f.coeffs[eb.dofs[i]] * grads[i];
  return g;
}

SymMat2 eval_hessian(const MorleyFunction& f, int element) {
  const ElementBasis& eb = f.space->element_basis(element);
  SymMat2 h;
  for (int i = 0; i < 6; ++i) {
    const double c = f.coeffs[eb.dofs[i]];
    h.xx += c * eb.hessians[i].xx;
    h.xy += c * eb.hessians[i].xy;
    h.yy += c * eb.hessians[i].yy;
  }
  return h;
}

double hat_eval(const MorleyFunction& f, Point2 p) {
  const auto hits = f.space->mesh().locate(p);
  double sum = 0.0;
  for (const LocateHit& hit : hits) sum += eval(f, hit.tri, p);
  return sum / static_cast<double>(hits.size());
}

double h2_seminorm(const MorleyFunction& f) {
  const MorleySpace& space = *f.space;
  double sum = 0.0;
  for (int t = 0; t < space.mesh().triangle_count(); ++t) {
    sum += space.mesh().area(t) * eval_hessian(f, t).frobenius_sq();
  }
  return std::sqrt(sum);
}

}  // namespace tpsfem
