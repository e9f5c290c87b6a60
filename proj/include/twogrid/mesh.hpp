#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace twogrid {

using Point2 = Eigen::Vector2d;
using Barycentric = Eigen::Vector3d;

/// Structured triangulation of the unit square with nodes (i/N, j/N).
///
/// Every grid cell is split along its bottom-left to top-right diagonal into
/// a lower triangle (index 2*(j*N+i)) and an upper triangle (index +1).
/// Vertex (i, j) has index j*(N+1)+i. Triangles are counter-clockwise.
struct StructuredTriMesh {
  int n_subdiv = 0;
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  /// Edge e joins edges[e][0] < edges[e][1].
  std::vector<std::array<int, 2>> edges;
  std::vector<Point2> edge_midpoints;
  /// triangle_edges[t][k] is the edge opposite local vertex k.
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<bool> boundary_vertex;
  std::vector<bool> boundary_edge;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  std::size_t num_edges() const { return edges.size(); }
  double mesh_size() const { return 1.0 / n_subdiv; }
};

struct PointLocation {
  int triangle = -1;
  Barycentric lambda = Barycentric::Zero();
};

struct TriangleAffineData {
  std::array<Point2, 3> vertices;
  /// Row k is the (constant) gradient of barycentric coordinate k.
  Eigen::Matrix<double, 3, 2> grad_lambda;
  double area = 0.0;
};

StructuredTriMesh build_unit_square_mesh(int n_subdiv);

/// Throws OutOfDomainError for points further than 1e-12 outside [0,1]^2.
PointLocation locate_point(const StructuredTriMesh& mesh, const Point2& x);

TriangleAffineData triangle_affine_data(const StructuredTriMesh& mesh, int triangle);

inline Point2 barycentric_to_cartesian(const StructuredTriMesh& mesh, int triangle,
                                       const Barycentric& lambda) {
  const auto& t = mesh.triangles[triangle];
  return lambda(0) * mesh.vertices[t[0]] + lambda(1) * mesh.vertices[t[1]] +
         lambda(2) * mesh.vertices[t[2]];
}

/// "v x y" per vertex, then "t i j k" per triangle (0-based).
void write_mesh(std::ostream& os, const StructuredTriMesh& mesh);

}  // namespace twogrid
