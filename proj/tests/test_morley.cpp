#include "tpsfem/morley.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <random>

#include "tpsfem/errors.hpp"
#include "tpsfem/mesh.hpp"

namespace tpsfem {
namespace {

std::shared_ptr<const MorleySpace> make_space(int divisions, Rect domain = Rect{}) {
  auto mesh = std::make_shared<const Mesh2D>(build_uniform_mesh(divisions, domain));
  return std::make_shared<const MorleySpace>(mesh);
}

std::shared_ptr<const MorleySpace> single_triangle_space(Point2 a, Point2 b, Point2 c) {
  const Rect box{std::min({a.x, b.x, c.x}), std::min({a.y, b.y, c.y}),
                 std::max({a.x, b.x, c.x}), std::max({a.y, b.y, c.y})};
  auto mesh = std::make_shared<const Mesh2D>(
      Mesh2D({a, b, c}, {Triangle{{0, 1, 2}}}, box, 0));
  return std::make_shared<const MorleySpace>(mesh);
}

// Applies the six local DOF functionals to the six shape functions.
Eigen::Matrix<double, 6, 6> duality_matrix(const MorleySpace& space, int t) {
  const Mesh2D& mesh = space.mesh();
  const auto& tri = mesh.triangles()[t].v;
  Eigen::Matrix<double, 6, 6> d;
  for (int k = 0; k < 3; ++k) {
    const auto values = space.basis_values(t, mesh.vertices()[tri[k]]);
    for (int i = 0; i < 6; ++i) d(k, i) = values[i];
  }
  for (int k = 0; k < 3; ++k) {
    const int e = mesh.tri_edges(t)[k].edge;
    const auto grads = space.basis_gradients(t, mesh.edge_midpoint(e));
    const Vec2 n = mesh.edge_normal(e);
    for (int i = 0; i < 6; ++i) d(3 + k, i) = dot(grads[i], n);
  }
  return d;
}

TEST(Morley, ReferenceTriangleDuality) {
  const auto space = single_triangle_space({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
  const auto d = duality_matrix(*space, 0);
  const double residual =
      (d - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff();
  EXPECT_LE(residual, 1e-12);
}

TEST(Morley, InterpolatingXSquaredOnReferenceTriangle) {
  const auto space = single_triangle_space({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
  const auto f = interpolate(
      space, [](Point2 p) { return p.x * p.x; },
      [](Point2 p) { return Vec2{2.0 * p.x, 0.0}; });
  const double s = 1.0 / std::sqrt(2.0);
  ASSERT_EQ(f.coeffs.size(), 6u);
  EXPECT_NEAR(f.coeffs[0], 0.0, 1e-15);
  EXPECT_NEAR(f.coeffs[1], 1.0, 1e-15);
  EXPECT_NEAR(f.coeffs[2], 0.0, 1e-15);
  // Edges are numbered opposite their vertices: hypotenuse, left, bottom.
  EXPECT_NEAR(f.coeffs[3], -s, 1e-15);
  EXPECT_NEAR(f.coeffs[4], 0.0, 1e-15);
  EXPECT_NEAR(f.coeffs[5], 0.0, 1e-15);
}

TEST(Morley, UnisolvenceOnRandomElements) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int accepted = 0;
  while (accepted < 100) {
    Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    if (cross(b - a, c - a) < 0.0) std::swap(b, c);
    if (cross(b - a, c - a) < 0.05) continue;  // skip slivers
    ++accepted;
    const auto space = single_triangle_space(a, b, c);
    const auto d = duality_matrix(*space, 0);
    const double residual =
        (d - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff();
    EXPECT_LE(residual, 1e-10);

    Eigen::Matrix<double, 6, 6> coeff;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) coeff(j, i) = space->element_basis(0).coeff[i][j];
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(coeff);
    const double cond =
        svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    EXPECT_TRUE(std::isfinite(cond));
    EXPECT_LT(cond, 1e8);
  }
}

double quadratic(Point2 p) {
  return 1.0 + 2.0 * p.x - 3.0 * p.y + 4.0 * p.x * p.x - p.x * p.y + 2.0 * p.y * p.y;
}
Vec2 quadratic_gradient(Point2 p) {
  return {2.0 + 8.0 * p.x - p.y, -3.0 - p.x + 4.0 * p.y};
}

TEST(Morley, ReproducesGlobalQuadratics) {
  const auto space = make_space(3);
  const auto f = interpolate(space, quadratic, quadratic_gradient);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point2 p{u(rng), u(rng)};
    EXPECT_NEAR(hat_eval(f, p), quadratic(p), 1e-11);
  }
  for (int t = 0; t < space->mesh().triangle_count(); ++t) {
    const SymMat2 h = eval_hessian(f, t);
    EXPECT_NEAR(h.xx, 8.0, 1e-10);
    EXPECT_NEAR(h.xy, -1.0, 1e-10);
    EXPECT_NEAR(h.yy, 4.0, 1e-10);
  }
}

TEST(Morley, InterpolatesAffineExactly) {
  const auto space = make_space(4, Rect{-1.0, -1.0, 1.0, 1.0});
  const auto f = interpolate(
      space, [](Point2 p) { return 0.5 - 2.0 * p.x + 3.0 * p.y; },
      [](Point2) { return Vec2{-2.0, 3.0}; });
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Point2 p{u(rng), u(rng)};
    EXPECT_NEAR(hat_eval(f, p), 0.5 - 2.0 * p.x + 3.0 * p.y, 1e-12);
  }
  for (int t = 0; t < space->mesh().triangle_count(); ++t) {
    const Vec2 g = eval_gradient(f, t, space->mesh().edge_midpoint(space->mesh().tri_edges(t)[0].edge));
    EXPECT_NEAR(g.x, -2.0, 1e-12);
    EXPECT_NEAR(g.y, 3.0, 1e-12);
    EXPECT_NEAR(eval_hessian(f, t).frobenius_sq(), 0.0, 1e-20);
  }
  EXPECT_NEAR(h2_seminorm(f), 0.0, 1e-12);
}

MorleyFunction random_function(std::shared_ptr<const MorleySpace> space, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  MorleyFunction f;
  f.coeffs.resize(space->dof_count());
  for (double& c : f.coeffs) c = g(rng);
  f.space = std::move(space);
  return f;
}

TEST(Morley, HatEvalAveragesOneSidedValues) {
  const auto space = make_space(2);
  const auto f = random_function(space, 17);
  const Mesh2D& mesh = space->mesh();

  // A point on an interior edge, away from its midpoint.
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (mesh.edge_use_count(e) != 2) continue;
    const Edge edge = mesh.edges()[e];
    const Point2 a = mesh.vertices()[edge.a], b = mesh.vertices()[edge.b];
    const Point2 p{0.75 * a.x + 0.25 * b.x, 0.75 * a.y + 0.25 * b.y};
    const auto hits = mesh.locate(p);
    ASSERT_EQ(hits.size(), 2u);
    const double expected = 0.5 * (eval(f, hits[0].tri, p) + eval(f, hits[1].tri, p));
    EXPECT_NEAR(hat_eval(f, p), expected, 1e-13);
  }

  // The center vertex is shared by six elements.
  const Point2 center{0.5, 0.5};
  const auto hits = mesh.locate(center);
  ASSERT_EQ(hits.size(), 6u);
  double sum = 0.0;
  for (const auto& h : hits) sum += eval(f, h.tri, center);
  EXPECT_NEAR(hat_eval(f, center), sum / 6.0, 1e-13);
}

TEST(Morley, SharedFunctionalsAreSingleValued) {
  const auto space = make_space(3);
  const auto f = random_function(space, 23);
  const Mesh2D& mesh = space->mesh();

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangles()[t].v[k];
      EXPECT_NEAR(eval(f, t, mesh.vertices()[v]), f.coeffs[space->vertex_dof(v)], 1e-11);
      const int e = mesh.tri_edges(t)[k].edge;
      const Vec2 g = eval_gradient(f, t, mesh.edge_midpoint(e));
      EXPECT_NEAR(dot(g, mesh.edge_normal(e)), f.coeffs[space->edge_dof(e)], 1e-11);
    }
  }
}

TEST(Morley, HessianMatchesFiniteDifferences) {
  const auto space = make_space(2);
  const auto f = random_function(space, 29);
  const int t = 3;
  const auto& tri = space->mesh().triangles()[t].v;
  Point2 center{0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    center.x += space->mesh().vertices()[tri[k]].x / 3.0;
    center.y += space->mesh().vertices()[tri[k]].y / 3.0;
  }
  const double d = 1e-4;
  auto at = [&](double dx, double dy) { return eval(f, t, {center.x + dx, center.y + dy}); };
  const double fxx = (at(d, 0) - 2.0 * at(0, 0) + at(-d, 0)) / (d * d);
  const double fyy = (at(0, d) - 2.0 * at(0, 0) + at(0, -d)) / (d * d);
  const double fxy = (at(d, d) - at(d, -d) - at(-d, d) + at(-d, -d)) / (4.0 * d * d);
  const SymMat2 h = eval_hessian(f, t);
  EXPECT_NEAR(h.xx, fxx, 1e-6);
  EXPECT_NEAR(h.xy, fxy, 1e-6);
  EXPECT_NEAR(h.yy, fyy, 1e-6);
}

TEST(Morley, SeminormOfSimplePolynomials) {
  const auto space = make_space(2);

  const auto x2 = interpolate(
      space, [](Point2 p) { return p.x * p.x; },
      [](Point2 p) { return Vec2{2.0 * p.x, 0.0}; });
  EXPECT_NEAR(h2_seminorm(x2), 2.0, 1e-12);

  const auto xy = interpolate(
      space, [](Point2 p) { return p.x * p.y; },
      [](Point2 p) { return Vec2{p.y, p.x}; });
  EXPECT_NEAR(h2_seminorm(xy), std::sqrt(2.0), 1e-12);

  const auto r2 = interpolate(
      space, [](Point2 p) { return p.x * p.x + p.y * p.y; },
      [](Point2 p) { return Vec2{2.0 * p.x, 2.0 * p.y}; });
  EXPECT_NEAR(h2_seminorm(r2), 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(Morley, EvalOutsideElementThrows) {
  const auto space = make_space(2);
  const auto f = random_function(space, 31);
  EXPECT_THROW(eval(f, 0, {0.9, 0.9}), InvalidArgument);
  EXPECT_THROW(eval_gradient(f, 0, {0.9, 0.9}), InvalidArgument);
}

TEST(Morley, InterpolantJumpsDecayUnderRefinement) {
  auto value = [](Point2 p) { return std::exp(p.x) * std::sin(2.0 * p.y) + p.x * p.x * p.x * p.y; };
  auto gradient = [](Point2 p) {
    return Vec2{std::exp(p.x) * std::sin(2.0 * p.y) + 3.0 * p.x * p.x * p.y,
                2.0 * std::exp(p.x) * std::cos(2.0 * p.y) + p.x * p.x * p.x};
  };

  std::vector<double> hs, jumps;
  for (int m : {4, 8, 16, 32}) {
    const auto space = make_space(m);
    const auto f = interpolate(space, value, gradient);
    const Mesh2D& mesh = space->mesh();
    double max_jump = 0.0;
    for (int e = 0; e < mesh.edge_count(); ++e) {
      if (mesh.edge_use_count(e) != 2) continue;
      const Edge edge = mesh.edges()[e];
      const Point2 a = mesh.vertices()[edge.a], b = mesh.vertices()[edge.b];
      int t0 = -1, t1 = -1;
      for (int t = 0; t < mesh.triangle_count() && t1 < 0; ++t) {
        for (const EdgeUse& u : mesh.tri_edges(t)) {
          if (u.edge == e) (t0 < 0 ? t0 : t1) = t;
        }
      }
      for (double alpha : {0.25, 0.5, 0.75}) {
        const Point2 p{(1.0 - alpha) * a.x + alpha * b.x, (1.0 - alpha) * a.y + alpha * b.y};
        max_jump = std::max(max_jump, std::abs(eval(f, t0, p) - eval(f, t1, p)));
      }
    }
    hs.push_back(mesh.mesh_size());
    jumps.push_back(max_jump);
  }

  // Least-squares slope of log(jump) against log(h).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const int n = static_cast<int>(hs.size());
  for (int i = 0; i < n; ++i) {
    const double x = std::log(hs[i]), y = std::log(jumps[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_GE(slope, 1.5);
}

}  // namespace
}  // namespace tpsfem
