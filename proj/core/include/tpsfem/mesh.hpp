#pragma once

#include <array>
#include <vector>

#include "tpsfem/geometry.hpp"

namespace tpsfem {

/// Vertex indices of a triangle, in counterclockwise order.
struct Triangle {
  std::array<int, 3> v{};
};

/// Undirected edge between vertex indices a < b.
struct Edge {
  int a = -1;
  int b = -1;
};

/// Reference from a triangle to one of its edges. `sign` is +1 when the
/// triangle's outward normal on that edge coincides with the global edge
/// normal, -1 otherwise.
struct EdgeUse {
  int edge = -1;
  int sign = 0;
};

/// One triangle whose closure contains a query point, with its barycentric
/// coordinates there.
struct LocateHit {
  int tri = -1;
  std::array<double, 3> bary{};
};

/// Conforming triangulation of an axis-aligned rectangle.
///
/// Vertices, triangles and edges are indexed densely from zero. Each edge
/// carries a fixed global normal: rotate the direction from its lower-index
/// vertex to its higher-index vertex by +90 degrees. Point location uses a
/// uniform background grid whose cells are the squares the mesh was built
/// from.
class Mesh2D {
 public:
  Mesh2D(std::vector<Point2> vertices, std::vector<Triangle> triangles, Rect domain,
         int divisions);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Edges of triangle t; local edge i is opposite local vertex i.
  const std::array<EdgeUse, 3>& tri_edges(int t) const { return tri_edges_[t]; }

  double area(int t) const { return areas_[t]; }
  double edge_length(int e) const;
  Point2 edge_midpoint(int e) const;
  Vec2 edge_normal(int e) const;

  /// Number of triangles sharing each edge (1 on the boundary, 2 inside).
  int edge_use_count(int e) const { return edge_uses_[e]; }

  double max_edge_length() const { return max_edge_; }
  double min_edge_length() const { return min_edge_; }
  /// Mesh size h: the longest edge.
  double mesh_size() const { return max_edge_; }

  const Rect& domain() const { return domain_; }
  int divisions() const { return divisions_; }

  /// All triangles whose closure contains p, with barycentric coordinates.
  /// Containment allows a small negative slack eps on the barycentric
  /// coordinates. Throws PointOutsideDomain if p is outside the domain.
  std::vector<LocateHit> locate(Point2 p, double eps = 1e-12) const;

  /// Barycentric coordinates of p with respect to triangle t.
  std::array<double, 3> barycentric(int t, Point2 p) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<EdgeUse, 3>> tri_edges_;
  std::vector<int> edge_uses_;
  std::vector<double> areas_;
  Rect domain_;
  int divisions_ = 0;
  double max_edge_ = 0.0;
  double min_edge_ = 0.0;
};

/// Uniform triangulation of `domain`: divisions x divisions squares, each
/// split along the diagonal from its lower-left to its upper-right corner.
Mesh2D build_uniform_mesh(int divisions, Rect domain = Rect{});

}  // namespace tpsfem
