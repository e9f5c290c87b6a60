#include "twogrid/norms.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace twogrid {

namespace {

struct Sample {
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
  double p = 0.0;
};

// Sampler receives the integration triangle, its barycentric point and the
// Cartesian point.
using Sampler = std::function<Sample(int, const Barycentric&, const Point2&)>;

ErrorReport integrate_errors(const StructuredTriMesh& mesh, const QuadRule& rule,
                             const Sampler& numeric, const Sampler& reference) {
  double l2_u = 0.0, semi_u = 0.0, l2_u1 = 0.0, semi_u1 = 0.0;
  double p_diff_integral = 0.0;
  std::vector<double> p_diff;
  std::vector<double> p_weight;
  p_diff.reserve(mesh.num_triangles() * rule.size());
  p_weight.reserve(p_diff.capacity());
  for (std::size_t tt = 0; tt < mesh.num_triangles(); ++tt) {
    const int t = static_cast<int>(tt);
    const double area = triangle_affine_data(mesh, t).area;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point2 x = barycentric_to_cartesian(mesh, t, rule.points[q]);
      const Sample a = numeric(t, rule.points[q], x);
      const Sample b = reference(t, rule.points[q], x);
      const double w = area * rule.weights[q];
      const Eigen::Vector2d du = a.u - b.u;
      const Eigen::Matrix2d dg = a.grad - b.grad;
      l2_u += w * du.squaredNorm();
      semi_u += w * dg.squaredNorm();
      l2_u1 += w * du(0) * du(0);
      semi_u1 += w * dg.row(0).squaredNorm();
      p_diff.push_back(a.p - b.p);
      p_weight.push_back(w);
      p_diff_integral += w * (a.p - b.p);
    }
  }
  const double total_weight = std::accumulate(p_weight.begin(), p_weight.end(), 0.0);
  const double mean = p_diff_integral / total_weight;
  double l2_p = 0.0;
  for (std::size_t k = 0; k < p_diff.size(); ++k) {
    const double d = p_diff[k] - mean;
    l2_p += p_weight[k] * d * d;
  }
  ErrorReport report;
  report.err_u_L2 = std::sqrt(l2_u);
  report.err_u_H1_semi = std::sqrt(semi_u);
  report.err_u_H1 = std::sqrt(l2_u + semi_u);
  report.err_p_L2 = std::sqrt(l2_p);
  report.err_u1_L2 = std::sqrt(l2_u1);
  report.err_u1_H1 = std::sqrt(l2_u1 + semi_u1);
  return report;
}

Sample sample_fields_at(const FEField& u, const FEField* p, const Point2& x) {
  Sample s;
  const VelocitySample v = eval_velocity(u, x, true);
  s.u = v.value;
  s.grad = v.grad;
  if (p) s.p = eval_pressure(*p, x, false).value;
  return s;
}

}  // namespace

ErrorReport compute_errors(const FEField& u, const FEField* p, const ExactSolution& exact, double t,
                           int rule_degree) {
  const QuadRule& rule = rule_for_degree(rule_degree);
  const bool has_p = p != nullptr && static_cast<bool>(exact.pressure);
  Sampler numeric = [&](int tri, const Barycentric& lambda, const Point2&) {
    Sample s;
    const VelocitySample v = eval_velocity_local(u, tri, lambda, true);
    s.u = v.value;
    s.grad = v.grad;
    if (has_p) s.p = eval_pressure_local(*p, tri, lambda, false).value;
    return s;
  };
  Sampler reference = [&](int, const Barycentric&, const Point2& x) {
    Sample s;
    s.u = exact.velocity(x, t);
    s.grad = exact.velocity_gradient(x, t);
    if (has_p) s.p = exact.pressure(x, t);
    return s;
  };
  ErrorReport report = integrate_errors(u.space->mesh(), rule, numeric, reference);
  report.t = t;
  report.h = u.space->mesh_size();
  return report;
}

ErrorReport compute_field_differences(const FEField& u, const FEField* p, const FEField& ref_u,
                                      const FEField* ref_p, int rule_degree, int max_common) {
  const int na = u.space->mesh().n_subdiv;
  const int nb = ref_u.space->mesh().n_subdiv;
  const int common = std::lcm(na, nb);
  const StructuredTriMesh mesh =
      build_unit_square_mesh(common <= max_common ? common : std::max(na, nb));
  const bool has_p = p != nullptr && ref_p != nullptr;
  Sampler numeric = [&](int, const Barycentric&, const Point2& x) {
    return sample_fields_at(u, has_p ? p : nullptr, x);
  };
  Sampler reference = [&](int, const Barycentric&, const Point2& x) {
    return sample_fields_at(ref_u, has_p ? ref_p : nullptr, x);
  };
  ErrorReport report = integrate_errors(mesh, rule_for_degree(rule_degree), numeric, reference);
  report.h = u.space->mesh_size();
  return report;
}

double slope_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("slope_fit: need at least three points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [H, err] : points) {
    if (!(H > 0.0) || !(err > 0.0)) {
      throw std::invalid_argument("slope_fit: mesh sizes and errors must be positive");
    }
    sx += std::log(H);
    sy += std::log(err);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [H, err] : points) {
    const double dx = std::log(H) - mx;
    sxy += dx * (std::log(err) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace twogrid
