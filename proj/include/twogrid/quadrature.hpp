#pragma once

#include "twogrid/mesh.hpp"

#include <functional>
#include <vector>

namespace twogrid {

/// Quadrature on a triangle in barycentric form: the integral of f over a
/// triangle T is approximated by |T| * sum_q weights[q] * f(points[q]).
/// Weights are positive and sum to one.
struct QuadRule {
  int degree = 0;
  std::vector<Barycentric> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

inline constexpr int kAssemblyQuadDegree = 8;
inline constexpr int kErrorQuadDegree = 10;
inline constexpr int kMaxQuadDegree = 10;

/// Collapsed (Duffy) Gauss-Legendre product rule exact for polynomials of
/// total degree <= d on a triangle. Rules are built once and cached.
const QuadRule& rule_for_degree(int d);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

using ScalarIntegrand = std::function<double(const Point2&)>;

/// Throws NumericalError (naming the triangle) if the integrand is not finite.
double integrate_on_triangle(const StructuredTriMesh& mesh, int triangle, const QuadRule& rule,
                             const ScalarIntegrand& integrand);

double integrate_over_mesh(const StructuredTriMesh& mesh, const QuadRule& rule,
                           const ScalarIntegrand& integrand);

}  // namespace twogrid
