#include "twogrid/mesh.hpp"

#include "twogrid/exceptions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twogrid {

namespace {
constexpr double kLocateTol = 1e-12;
}

StructuredTriMesh build_unit_square_mesh(int n_subdiv) {
  if (n_subdiv < 1) {
    throw std::invalid_argument("build_unit_square_mesh: n_subdiv must be >= 1");
  }
  const int n = n_subdiv;
  StructuredTriMesh mesh;
  mesh.n_subdiv = n;

  mesh.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  mesh.boundary_vertex.reserve(mesh.vertices.capacity());
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
      mesh.boundary_vertex.push_back(i == 0 || i == n || j == 0 || j == n);
    }
  }

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }

  // Edges numbered in order of first appearance while walking triangles.
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<int> edge_count;
  mesh.triangle_edges.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3];
      int b = tri[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_id.try_emplace({a, b}, static_cast<int>(mesh.edges.size()));
      if (inserted) {
        mesh.edges.push_back({a, b});
        mesh.edge_midpoints.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
        edge_count.push_back(0);
      }
      ++edge_count[it->second];
      mesh.triangle_edges[t][k] = it->second;
    }
  }
  mesh.boundary_edge.resize(mesh.edges.size());
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    mesh.boundary_edge[e] = (edge_count[e] == 1);
  }
  return mesh;
}

PointLocation locate_point(const StructuredTriMesh& mesh, const Point2& x) {
  if (!(x(0) >= -kLocateTol && x(0) <= 1.0 + kLocateTol && x(1) >= -kLocateTol &&
        x(1) <= 1.0 + kLocateTol)) {
    std::ostringstream msg;
    msg << "locate_point: (" << x(0) << ", " << x(1) << ") outside the unit square";
    throw OutOfDomainError(msg.str());
  }
  const int n = mesh.n_subdiv;
  const double sx = x(0) * n;
  const double sy = x(1) * n;
  const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, n - 1);
  const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, n - 1);
  const double xi = sx - i;
  const double eta = sy - j;

  PointLocation loc;
  const int cell = j * n + i;
  if (eta <= xi + kLocateTol) {
    loc.triangle = 2 * cell;
    loc.lambda = Barycentric(1.0 - xi, xi - eta, eta);
  } else {
    loc.triangle = 2 * cell + 1;
    loc.lambda = Barycentric(1.0 - eta, xi, eta - xi);
  }
  return loc;
}

TriangleAffineData triangle_affine_data(const StructuredTriMesh& mesh, int triangle) {
  if (triangle < 0 || static_cast<std::size_t>(triangle) >= mesh.num_triangles()) {
    throw std::out_of_range("triangle_affine_data: triangle index out of range");
  }
  const auto& tri = mesh.triangles[triangle];
  TriangleAffineData data;
  for (int k = 0; k < 3; ++k) data.vertices[k] = mesh.vertices[tri[k]];
  const Point2 e1 = data.vertices[1] - data.vertices[0];
  const Point2 e2 = data.vertices[2] - data.vertices[0];
  const double det = e1(0) * e2(1) - e1(1) * e2(0);
  data.area = 0.5 * det;
  // grad(lambda_k) = rot(opposite edge) / det
  for (int k = 0; k < 3; ++k) {
    const Point2& a = data.vertices[(k + 1) % 3];
    const Point2& b = data.vertices[(k + 2) % 3];
    data.grad_lambda(k, 0) = (a(1) - b(1)) / det;
    data.grad_lambda(k, 1) = (b(0) - a(0)) / det;
  }
  return data;
}

void write_mesh(std::ostream& os, const StructuredTriMesh& mesh) {
  const auto old_precision = os.precision(17);
  for (const auto& v : mesh.vertices) os << "v " << v(0) << ' ' << v(1) << '\n';
  for (const auto& t : mesh.triangles) os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os.precision(old_precision);
}

}  // namespace twogrid
