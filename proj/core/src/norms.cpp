#include "tpsfem/norms.hpp"

#include <cmath>

#include "tpsfem/errors.hpp"
#include "tpsfem/mesh.hpp"
#include "tpsfem/quadrature.hpp"

namespace tpsfem {

namespace {

Point2 physical_point(const Mesh2D& mesh, int t, Point2 ref) {
  const Triangle& tri = mesh.triangles()[t];
  const Point2 a = mesh.vertices()[tri.v[0]];
  const Point2 b = mesh.vertices()[tri.v[1]];
  const Point2 c = mesh.vertices()[tri.v[2]];
  return Point2{a.x + (b.x - a.x) * ref.x + (c.x - a.x) * ref.y,
                a.y + (b.y - a.y) * ref.x + (c.y - a.y) * ref.y};
}

}  // namespace

double error_l2(const MorleyFunction& f,
                const std::function<double(Point2)>& reference,
                int quad_degree) {
  if (!f.space) throw InvalidArgument("error_l2: function has no space");
  const Mesh2D& mesh = f.space->mesh();
  const TriangleRule rule = triangle_rule(quad_degree);
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    double local = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Point2 p = physical_point(mesh, t, rule.points[q]);
      const double d = eval(f, t, p) - reference(p);
      local += rule.weights[q] * d * d;
    }
    acc += 2.0 * mesh.area(t) * local;
  }
  return std::sqrt(acc);
}

double error_h1_broken(const MorleyFunction& f,
                       const std::function<Vec2(Point2)>& reference_gradient,
                       int quad_degree) {
  if (!f.space) throw InvalidArgument("error_h1_broken: function has no space");
  const Mesh2D& mesh = f.space->mesh();
  const TriangleRule rule = triangle_rule(quad_degree);
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    double local = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Point2 p = physical_point(mesh, t, rule.points[q]);
      const Vec2 d = eval_gradient(f, t, p) - reference_gradient(p);
      local += rule.weights[q] * (d.x * d.x + d.y * d.y);
    }
    acc += 2.0 * mesh.area(t) * local;
  }
  return std::sqrt(acc);
}

double error_empirical(const MorleyFunction& f,
                       const std::function<double(Point2)>& reference,
                       const std::vector<Point2>& points) {
  if (points.empty()) throw InvalidArgument("error_empirical: no points");
  double acc = 0.0;
  for (const Point2& p : points) {
    const double d = hat_eval(f, p) - reference(p);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(points.size()));
}

double empirical_norm(const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("empirical_norm: no values");
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace tpsfem
