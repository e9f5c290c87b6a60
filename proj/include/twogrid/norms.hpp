#pragma once

#include "twogrid/exact_solutions.hpp"
#include "twogrid/fe_space.hpp"
#include "twogrid/quadrature.hpp"

#include <string>
#include <utility>
#include <vector>

namespace twogrid {

struct ErrorReport {
  std::string method;
  double H = 0.0;
  double h = 0.0;
  double nu = 0.0;
  double t = 0.0;
  double err_u_L2 = 0.0;
  /// Full H1 norm: sqrt(L2^2 + seminorm^2).
  double err_u_H1 = 0.0;
  double err_u_H1_semi = 0.0;
  /// Pressure error with each field's mean removed.
  double err_p_L2 = 0.0;
  /// First velocity component only.
  double err_u1_L2 = 0.0;
  double err_u1_H1 = 0.0;
};

/// Errors of (u, p) against an analytic solution at time t, integrated on
/// the numeric field's mesh. `p` may be null, which leaves err_p_L2 at 0.
ErrorReport compute_errors(const FEField& u, const FEField* p, const ExactSolution& exact, double t,
                           int rule_degree = kErrorQuadDegree);

/// Differences between two discrete solutions that may live on different
/// meshes. Integration uses the common refinement when the meshes are
/// nested in a common mesh of at most `max_common` subdivisions, otherwise
/// the finer of the two meshes.
ErrorReport compute_field_differences(const FEField& u, const FEField* p, const FEField& ref_u,
                                      const FEField* ref_p, int rule_degree = kErrorQuadDegree,
                                      int max_common = 240);

/// Least-squares slope of log(err) against log(H). Needs at least three
/// points; errors must be positive.
double slope_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace twogrid
