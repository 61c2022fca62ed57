#include "tpsfem/argyris.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "tpsfem/errors.hpp"
#include "tpsfem/quadrature.hpp"

namespace tpsfem {

namespace {

struct Mono {
  int a, b;  // xi^a * eta^b
};

// Degree-graded order, x-power descending within a degree.
constexpr std::array<Mono, 21> kMonos = [] {
  std::array<Mono, 21> m{};
  int idx = 0;
  for (int deg = 0; deg <= 5; ++deg) {
    for (int a = deg; a >= 0; --a) {
      m[idx++] = Mono{a, deg - a};
    }
  }
  return m;
}();

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) {
    r *= x;
  }
  return r;
}

double mono_value(const Mono& m, Point2 p) {
  return ipow(p.x, m.a) * ipow(p.y, m.b);
}

Vec2 mono_gradient(const Mono& m, Point2 p) {
  const double gx =
      m.a >= 1 ? m.a * ipow(p.x, m.a - 1) * ipow(p.y, m.b) : 0.0;
  const double gy =
      m.b >= 1 ? m.b * ipow(p.x, m.a) * ipow(p.y, m.b - 1) : 0.0;
  return Vec2{gx, gy};
}

SymMat2 mono_hessian(const Mono& m, Point2 p) {
  const double hxx =
      m.a >= 2 ? m.a * (m.a - 1) * ipow(p.x, m.a - 2) * ipow(p.y, m.b) : 0.0;
  const double hxy = (m.a >= 1 && m.b >= 1)
                         ? m.a * m.b * ipow(p.x, m.a - 1) * ipow(p.y, m.b - 1)
                         : 0.0;
  const double hyy =
      m.b >= 2 ? m.b * (m.b - 1) * ipow(p.x, m.a) * ipow(p.y, m.b - 2) : 0.0;
  return SymMat2{hxx, hxy, hyy};
}

Vec2 map_gradient(const std::array<double, 4>& finv, Vec2 g) {
  return Vec2{finv[0] * g.x + finv[2] * g.y, finv[1] * g.x + finv[3] * g.y};
}

SymMat2 map_hessian(const std::array<double, 4>& finv, const SymMat2& h) {
  // finv^T * H * finv with finv stored row-major.
  const double t00 = finv[0] * h.xx + finv[2] * h.xy;
  const double t01 = finv[0] * h.xy + finv[2] * h.yy;
  const double t10 = finv[1] * h.xx + finv[3] * h.xy;
  const double t11 = finv[1] * h.xy + finv[3] * h.yy;
  return SymMat2{t00 * finv[0] + t01 * finv[2], t00 * finv[1] + t01 * finv[3],
                 t10 * finv[1] + t11 * finv[3]};
}

// Reference midpoints of the local edges, edge i opposite vertex i.
constexpr std::array<Point2, 3> kRefMid = {Point2{0.5, 0.5}, Point2{0.0, 0.5},
                                           Point2{0.5, 0.0}};
constexpr std::array<Point2, 3> kRefVert = {Point2{0.0, 0.0}, Point2{1.0, 0.0},
                                            Point2{0.0, 1.0}};

}  // namespace

ArgyrisSpace::ArgyrisSpace(std::shared_ptr<const Mesh2D> mesh)
    : mesh_(std::move(mesh)) {
  if (!mesh_) {
    throw InvalidArgument("ArgyrisSpace: null mesh");
  }
  const int nt = mesh_->triangle_count();
  elements_.resize(nt);
  Eigen::Matrix<double, 21, 21> m;
  for (int t = 0; t < nt; ++t) {
    Element& el = elements_[t];
    const Triangle& tri = mesh_->triangles()[t];
    const Point2 a0 = mesh_->vertices()[tri.v[0]];
    const Point2 a1 = mesh_->vertices()[tri.v[1]];
    const Point2 a2 = mesh_->vertices()[tri.v[2]];
    const Vec2 e1 = a1 - a0;
    const Vec2 e2 = a2 - a0;
    const double det = e1.x * e2.y - e1.y * e2.x;
    el.origin = a0;
    el.finv = {e2.y / det, -e2.x / det, -e1.y / det, e1.x / det};

    const auto& edges = mesh_->tri_edges(t);
    for (int lv = 0; lv < 3; ++lv) {
      for (int k = 0; k < 6; ++k) {
        el.dofs[6 * lv + k] = vertex_dof(tri.v[lv], k);
      }
    }
    for (int le = 0; le < 3; ++le) {
      el.dofs[18 + le] = edge_dof(edges[le].edge);
    }

    // Functionals applied to the reference monomials, rows scaled by powers
    // of the diameter so the matrix stays well conditioned on fine meshes.
    const double diam =
        std::max({(a1 - a0).norm(), (a2 - a1).norm(), (a0 - a2).norm()});
    std::array<double, 21> scale{};
    for (int j = 0; j < 21; ++j) {
      const Mono& mono = kMonos[j];
      for (int lv = 0; lv < 3; ++lv) {
        const Point2 rv = kRefVert[lv];
        const Vec2 g = map_gradient(el.finv, mono_gradient(mono, rv));
        const SymMat2 h = map_hessian(el.finv, mono_hessian(mono, rv));
        m(6 * lv + 0, j) = mono_value(mono, rv);
        m(6 * lv + 1, j) = diam * g.x;
        m(6 * lv + 2, j) = diam * g.y;
        m(6 * lv + 3, j) = diam * diam * h.xx;
        m(6 * lv + 4, j) = diam * diam * h.xy;
        m(6 * lv + 5, j) = diam * diam * h.yy;
      }
      for (int le = 0; le < 3; ++le) {
        const Vec2 nrm = mesh_->edge_normal(edges[le].edge);
        const Vec2 g = map_gradient(el.finv, mono_gradient(mono, kRefMid[le]));
        m(18 + le, j) = diam * (nrm.x * g.x + nrm.y * g.y);
      }
    }
    for (int lv = 0; lv < 3; ++lv) {
      scale[6 * lv + 0] = 1.0;
      scale[6 * lv + 1] = diam;
      scale[6 * lv + 2] = diam;
      scale[6 * lv + 3] = diam * diam;
      scale[6 * lv + 4] = diam * diam;
      scale[6 * lv + 5] = diam * diam;
    }
    scale[18] = scale[19] = scale[20] = diam;

    Eigen::FullPivLU<Eigen::Matrix<double, 21, 21>> lu(m);
    if (!lu.isInvertible()) {
      throw IllConditionedSystem("ArgyrisSpace: degenerate local basis");
    }
    const Eigen::Matrix<double, 21, 21> inv = lu.inverse();
    const double err =
        (m * inv - Eigen::Matrix<double, 21, 21>::Identity()).cwiseAbs().maxCoeff();
    if (!(err <= 1e-7)) {
      throw IllConditionedSystem("ArgyrisSpace: local basis inversion failed");
    }
    // Shape function i for the unscaled functionals: scale row i of the
    // scaled-problem solution by its functional's factor.
    for (int i = 0; i < 21; ++i) {
      for (int j = 0; j < 21; ++j) {
        el.coeff[i][j] = scale[i] * inv(j, i);
      }
    }
  }
}

std::array<double, 21> ArgyrisSpace::basis_values(int t, Point2 p) const {
  const Element& el = elements_[t];
  const Vec2 d = p - el.origin;
  const Point2 r{el.finv[0] * d.x + el.finv[1] * d.y,
                 el.finv[2] * d.x + el.finv[3] * d.y};
  std::array<double, 21> mono{};
  for (int j = 0; j < 21; ++j) {
    mono[j] = mono_value(kMonos[j], r);
  }
  std::array<double, 21> out{};
  for (int i = 0; i < 21; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 21; ++j) {
      acc += el.coeff[i][j] * mono[j];
    }
    out[i] = acc;
  }
  return out;
}

std::array<Vec2, 21> ArgyrisSpace::basis_gradients(int t, Point2 p) const {
  const Element& el = elements_[t];
  const Vec2 d = p - el.origin;
  const Point2 r{el.finv[0] * d.x + el.finv[1] * d.y,
                 el.finv[2] * d.x + el.finv[3] * d.y};
  std::array<Vec2, 21> mono{};
  for (int j = 0; j < 21; ++j) {
    mono[j] = mono_gradient(kMonos[j], r);
  }
  std::array<Vec2, 21> out{};
  for (int i = 0; i < 21; ++i) {
    Vec2 acc{0.0, 0.0};
    for (int j = 0; j < 21; ++j) {
      acc.x += el.coeff[i][j] * mono[j].x;
      acc.y += el.coeff[i][j] * mono[j].y;
    }
    out[i] = map_gradient(el.finv, acc);
  }
  return out;
}

std::array<SymMat2, 21> ArgyrisSpace::basis_hessians(int t, Point2 p) const {
  const Element& el = elements_[t];
  const Vec2 d = p - el.origin;
  const Point2 r{el.finv[0] * d.x + el.finv[1] * d.y,
                 el.finv[2] * d.x + el.finv[3] * d.y};
  std::array<SymMat2, 21> out{};
  for (int i = 0; i < 21; ++i) {
    SymMat2 acc{0.0, 0.0, 0.0};
    for (int j = 0; j < 21; ++j) {
      const SymMat2 h = mono_hessian(kMonos[j], r);
      acc.xx += el.coeff[i][j] * h.xx;
      acc.xy += el.coeff[i][j] * h.xy;
      acc.yy += el.coeff[i][j] * h.yy;
    }
    out[i] = map_hessian(el.finv, acc);
  }
  return out;
}

ArgyrisFunction enrich(const MorleyFunction& v,
                       std::shared_ptr<const ArgyrisSpace> space) {
  if (!v.space) {
    throw InvalidArgument("enrich: function has no space");
  }
  if (!space) {
    space = std::make_shared<ArgyrisSpace>(v.space->mesh_ptr());
  } else if (space->mesh_ptr() != v.space->mesh_ptr()) {
    throw InvalidArgument("enrich: spaces live on different meshes");
  }
  const Mesh2D& mesh = space->mesh();
  const int nv = mesh.vertex_count();

  ArgyrisFunction out;
  out.space = space;
  out.coeffs.assign(space->dof_count(), 0.0);
  std::vector<int> incident(nv, 0);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const SymMat2 h = eval_hessian(v, t);
    for (int lv = 0; lv < 3; ++lv) {
      const int vid = mesh.triangles()[t].v[lv];
      const Vec2 g = eval_gradient(v, t, mesh.vertices()[vid]);
      out.coeffs[space->vertex_dof(vid, 1)] += g.x;
      out.coeffs[space->vertex_dof(vid, 2)] += g.y;
      out.coeffs[space->vertex_dof(vid, 3)] += h.xx;
      out.coeffs[space->vertex_dof(vid, 4)] += h.xy;
      out.coeffs[space->vertex_dof(vid, 5)] += h.yy;
      ++incident[vid];
    }
  }
  for (int vid = 0; vid < nv; ++vid) {
    out.coeffs[space->vertex_dof(vid, 0)] =
        v.coeffs[v.space->vertex_dof(vid)];
    for (int k = 1; k < 6; ++k) {
      out.coeffs[space->vertex_dof(vid, k)] /= incident[vid];
    }
  }
  for (int e = 0; e < mesh.edge_count(); ++e) {
    out.coeffs[space->edge_dof(e)] = v.coeffs[v.space->edge_dof(e)];
  }
  return out;
}

double eval(const ArgyrisFunction& f, int element, Point2 p) {
  const auto values = f.space->basis_values(element, p);
  const auto& dofs = f.space->local_dofs(element);
  double acc = 0.0;
  for (int i = 0; i < 21; ++i) {
    acc += f.coeffs[dofs[i]] * values[i];
  }
  return acc;
}

Vec2 eval_gradient(const ArgyrisFunction& f, int element, Point2 p) {
  const auto grads = f.space->basis_gradients(element, p);
  const auto& dofs = f.space->local_dofs(element);
  Vec2 acc{0.0, 0.0};
  for (int i = 0; i < 21; ++i) {
    acc.x += f.coeffs[dofs[i]] * grads[i].x;
    acc.y += f.coeffs[dofs[i]] * grads[i].y;
  }
  return acc;
}

SymMat2 eval_hessian(const ArgyrisFunction& f, int element, Point2 p) {
  const auto hes = f.space->basis_hessians(element, p);
  const auto& dofs = f.space->local_dofs(element);
  SymMat2 acc{0.0, 0.0, 0.0};
  for (int i = 0; i < 21; ++i) {
    acc.xx += f.coeffs[dofs[i]] * hes[i].xx;
    acc.xy += f.coeffs[dofs[i]] * hes[i].xy;
    acc.yy += f.coeffs[dofs[i]] * hes[i].yy;
  }
  return acc;
}

double eval_at(const ArgyrisFunction& f, Point2 p) {
  const auto hits = f.space->mesh().locate(p);
  return eval(f, hits.front().tri, p);
}

namespace {

// Physical quadrature points of one element.
Point2 physical_point(const Mesh2D& mesh, int t, Point2 ref) {
  const Triangle& tri = mesh.triangles()[t];
  const Point2 a0 = mesh.vertices()[tri.v[0]];
  const Point2 a1 = mesh.vertices()[tri.v[1]];
  const Point2 a2 = mesh.vertices()[tri.v[2]];
  return Point2{a0.x + (a1.x - a0.x) * ref.x + (a2.x - a0.x) * ref.y,
                a0.y + (a1.y - a0.y) * ref.x + (a2.y - a0.y) * ref.y};
}

}  // namespace

double h2_seminorm(const ArgyrisFunction& f) {
  const Mesh2D& mesh = f.space->mesh();
  const TriangleRule rule = triangle_rule(6);  // cubic Hessian, squared
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    double local = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point2 p = physical_point(mesh, t, rule.points[q]);
      local += rule.weights[q] * eval_hessian(f, t, p).frobenius_sq();
    }
    acc += 2.0 * mesh.area(t) * local;
  }
  return std::sqrt(acc);
}

double broken_distance(const MorleyFunction& v, const ArgyrisFunction& w,
                       int order) {
  if (v.space->mesh_ptr() != w.space->mesh_ptr()) {
    throw InvalidArgument("broken_distance: functions live on different meshes");
  }
  if (order < 0 || order > 2) {
    throw InvalidArgument("broken_distance: order must be 0, 1 or 2");
  }
  const Mesh2D& mesh = v.space->mesh();
  // Exact degrees: (2 vs 5) differences squared.
  const TriangleRule rule = triangle_rule(order == 0 ? 10 : order == 1 ? 8 : 6);
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    double local = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point2 p = physical_point(mesh, t, rule.points[q]);
      if (order == 0) {
        const double d = eval(v, t, p) - eval(w, t, p);
        local += rule.weights[q] * d * d;
      } else if (order == 1) {
        const Vec2 d = eval_gradient(v, t, p) - eval_gradient(w, t, p);
        local += rule.weights[q] * (d.x * d.x + d.y * d.y);
      } else {
        const SymMat2 d = eval_hessian(v, t) - eval_hessian(w, t, p);
        local += rule.weights[q] * d.frobenius_sq();
      }
    }
    acc += 2.0 * mesh.area(t) * local;
  }
  return std::sqrt(acc);
}

double hat_distance_n(const MorleyFunction& v, const ArgyrisFunction& w,
                      const std::vector<Point2>& points) {
  if (v.space->mesh_ptr() != w.space->mesh_ptr()) {
    throw InvalidArgument("hat_distance_n: functions live on different meshes");
  }
  if (points.empty()) {
    throw InvalidArgument("hat_distance_n: no points");
  }
  double acc = 0.0;
  for (const Point2& p : points) {
    const double d = hat_eval(v, p) - eval_at(w, p);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(points.size()));
}

}  // namespace tpsfem
