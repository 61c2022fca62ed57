#include "tpsfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>

#include "tpsfem/errors.hpp"

namespace tpsfem {

namespace {

uint64_t edge_key(int a, int b) {
  return (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b);
}

}  // namespace

Mesh2D::Mesh2D(std::vector<Point2> vertices, std::vector<Triangle> triangles, Rect domain,
               int divisions)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      domain_(domain),
      divisions_(divisions) {
  if (vertices_.empty() || triangles_.empty()) {
    throw InvalidArgument("mesh needs at least one triangle");
  }
  for (const Point2& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument("mesh vertex coordinates must be finite");
    }
  }

  const double scale = std::max(domain_.width(), domain_.height());
  areas_.resize(triangles_.size());
  tri_edges_.resize(triangles_.size());
  std::unordered_map<uint64_t, int> edge_ids;
  edge_ids.reserve(triangles_.size() * 2);

  max_edge_ = 0.0;
  min_edge_ = std::numeric_limits<double>::max();
  for (size_t t = 0; t < triangles_.size(); ++t) {
    const auto& v = triangles_[t].v;
    const Point2 p0 = vertices_[v[0]], p1 = vertices_[v[1]], p2 = vertices_[v[2]];
    const double twice_area = cross(p1 - p0, p2 - p0);
    if (twice_area <= 1e-14 * scale * scale) {
      throw DegenerateElement("triangle " + std::to_string(t) +
                              " is degenerate or not counterclockwise");
    }
    areas_[t] = 0.5 * twice_area;

    // Local edge i is opposite local vertex i.
    for (int i = 0; i < 3; ++i) {
      const int va = v[(i + 1) % 3], vb = v[(i + 2) % 3];
      const int lo = std::min(va, vb), hi = std::max(va, vb);
      auto [it, inserted] = edge_ids.try_emplace(edge_key(lo, hi), edge_count());
      if (inserted) edges_.push_back(Edge{lo, hi});
      // Traversal from the higher to the lower index makes the outward
      // normal match the global edge normal.
      tri_edges_[t][i] = EdgeUse{it->second, va > vb ? 1 : -1};
      const double len = (vertices_[vb] - vertices_[va]).norm();
      max_edge_ = std::max(max_edge_, len);
      min_edge_ = std::min(min_edge_, len);
    }
  }

  edge_uses_.assign(edges_.size(), 0);
  for (const auto& uses : tri_edges_) {
    for (const EdgeUse& u : uses) ++edge_uses_[u.edge];
  }
}

double Mesh2D::edge_length(int e) const {
  const Edge& ed = edges_[e];
  return (vertices_[ed.b] - vertices_[ed.a]).norm();
}

Point2 Mesh2D::edge_midpoint(int e) const {
  const Edge& ed = edges_[e];
  return {0.5 * (vertices_[ed.a].x + vertices_[ed.b].x),
          0.5 * (vertices_[ed.a].y + vertices_[ed.b].y)};
}

Vec2 Mesh2D::edge_normal(int e) const {
  const Edge& ed = edges_[e];
  const Vec2 d = vertices_[ed.b] - vertices_[ed.a];
  const double len = d.norm();
  return {-d.y / len, d.x / len};
}

std::array<double, 3> Mesh2D::barycentric(int t, Point2 p) const {
  const auto& v = triangles_[t].v;
  const Point2 p0 = vertices_[v[0]], p1 = vertices_[v[1]], p2 = vertices_[v[2]];
  const double inv = 1.0 / (2.0 * areas_[t]);
  return {cross(p1 - p, p2 - p) * inv, cross(p2 - p, p0 - p) * inv,
          cross(p0 - p, p1 - p) * inv};
}

std::vector<LocateHit> Mesh2D::locate(Point2 p, double eps) const {
  const double tol = 1e-12 * std::max(domain_.width(), domain_.height());
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !domain_.contains(p, tol)) {
    throw PointOutsideDomain("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                             ") is outside the mesh domain");
  }

  std::vector<LocateHit> hits;
  auto test_triangle = [&](int t) {
    const auto bary = barycentric(t, p);
    if (bary[0] >= -eps && bary[1] >= -eps && bary[2] >= -eps) {
      hits.push_back(LocateHit{t, bary});
    }
  };

  if (divisions_ > 0) {
    const int m = divisions_;
    const int ci = std::clamp(
        static_cast<int>(std::floor((p.x - domain_.x0) / domain_.width() * m)), 0, m - 1);
    const int cj = std::clamp(
        static_cast<int>(std::floor((p.y - domain_.y0) / domain_.height() * m)), 0, m - 1);
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int i = ci + di, j = cj + dj;
        if (i < 0 || i >= m || j < 0 || j >= m) continue;
        const int cell = 2 * (j * m + i);
        test_triangle(cell);
        test_triangle(cell + 1);
      }
    }
  } else {
    for (int t = 0; t < triangle_count(); ++t) test_triangle(t);
  }

  if (hits.empty()) {
    throw PointOutsideDomain("point location failed; point is outside the triangulation");
  }
  return hits;
}

Mesh2D build_uniform_mesh(int divisions, Rect domain) {
  if (divisions < 1) throw InvalidArgument("mesh divisions must be >= 1");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw InvalidArgument("mesh domain must have positive width and height");
  }

  const int m = divisions;
  std::vector<Point2> vertices;
  vertices.reserve((m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      vertices.push_back(Point2{domain.x0 + domain.width() * i / m,
                                domain.y0 + domain.height() * j / m});
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(2 * m * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int ll = j * (m + 1) + i;
      const int lr = ll + 1;
      const int ul = ll + (m + 1);
      const int ur = ul + 1;
      // Each square splits along its lower-left to upper-right diagonal.
      triangles.push_back(Triangle{{ll, lr, ur}});
      triangles.push_back(Triangle{{ll, ur, ul}});
    }
  }

  return Mesh2D(std::move(vertices), std::move(triangles), domain, m);
}

}  // namespace tpsfem
