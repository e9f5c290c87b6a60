#include "twogrid/quadrature.hpp"

#include "twogrid/exceptions.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace twogrid {

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_unit: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = (n == 1) ? x : p1;
    const double pnm1 = (n == 1) ? 1.0 : p0;
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    // Map [-1,1] -> [0,1].
    nodes[n - 1 - i] = 0.5 * (x + 1.0);
    weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

QuadRule build_collapsed_rule(int d) {
  // x = u, y = v (1 - u) maps the unit square onto the reference triangle
  // with Jacobian (1 - u): degree d + 1 in u, degree d in v.
  const int n = (d + 3) / 2;
  std::vector<double> nodes;
  std::vector<double> w;
  gauss_legendre_unit(n, nodes, w);
  QuadRule rule;
  rule.degree = d;
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double u = nodes[a];
      const double v = nodes[b];
      const double x = u;
      const double y = v * (1.0 - u);
      // Reference area is 1/2, so normalized weight = 2 * w_a w_b (1 - u).
      const double weight = 2.0 * w[a] * w[b] * (1.0 - u);
      rule.points.emplace_back(1.0 - x - y, x, y);
      rule.weights.push_back(weight);
      total += weight;
    }
  }
  for (double& weight : rule.weights) weight /= total;
  return rule;
}

}  // namespace

const QuadRule& rule_for_degree(int d) {
  if (d < 1 || d > kMaxQuadDegree) {
    throw std::invalid_argument("rule_for_degree: degree must lie in [1, 10], got " +
                                std::to_string(d));
  }
  static std::array<std::optional<QuadRule>, kMaxQuadDegree + 1> cache;
  static std::mutex guard;
  std::lock_guard lock(guard);
  if (!cache[d]) cache[d] = build_collapsed_rule(d);
  return *cache[d];
}

double integrate_on_triangle(const StructuredTriMesh& mesh, int triangle, const QuadRule& rule,
                             const ScalarIntegrand& integrand) {
  const auto data = triangle_affine_data(mesh, triangle);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point2 x = barycentric_to_cartesian(mesh, triangle, rule.points[q]);
    const double value = integrand(x);
    if (!std::isfinite(value)) {
      throw NumericalError("integrate_on_triangle: non-finite integrand on triangle " +
                           std::to_string(triangle));
    }
    sum += rule.weights[q] * value;
  }
  return data.area * sum;
}

double integrate_over_mesh(const StructuredTriMesh& mesh, const QuadRule& rule,
                           const ScalarIntegrand& integrand) {
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    total += integrate_on_triangle(mesh, static_cast<int>(t), rule, integrand);
  }
  return total;
}

}  // namespace twogrid
