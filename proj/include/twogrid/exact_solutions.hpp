#pragma once

#include "twogrid/galerkin.hpp"
#include "twogrid/mesh.hpp"

#include <Eigen/Core>

#include <functional>

namespace twogrid {

/// Analytic velocity/pressure pair used as an error reference.
struct ExactSolution {
  std::function<Eigen::Vector2d(const Point2&, double)> velocity;
  /// Row c is the gradient of component c.
  std::function<Eigen::Matrix2d(const Point2&, double)> velocity_gradient;
  std::function<double(const Point2&, double)> pressure;
};

/// Manufactured Navier-Stokes solution on the unit square:
///   u1 = pi t sin^2(pi x) sin(2 pi y)
///   u2 = -pi t sin^2(pi y) sin(2 pi x)
///   p  = 20 t x^2 y
namespace manufactured {

inline constexpr double kNu = 0.05;

Eigen::Vector2d velocity(const Point2& x, double t);
Eigen::Matrix2d velocity_gradient(const Point2& x, double t);
Eigen::Vector2d velocity_laplacian(const Point2& x, double t);
Eigen::Vector2d velocity_time_derivative(const Point2& x, double t);
double pressure(const Point2& x, double t);
Eigen::Vector2d pressure_gradient(const Point2& x, double t);

/// f = u_t - nu Lap u + (u . grad) u + grad p.
Eigen::Vector2d forcing(const Point2& x, double t, double nu = kNu);

/// Forcing of the steady Stokes problem with the same (u, p) frozen at t:
/// -nu Lap u + grad p, plus (u . grad) u when `with_convection` (Oseen with
/// the exact velocity as wind).
Eigen::Vector2d steady_forcing(const Point2& x, double t, double nu, bool with_convection);

ExactSolution solution();
Forcing forcing_function(double nu = kNu);

}  // namespace manufactured

/// Divergence-free vortex initial velocity with zero trace:
///   u1 = -6 sin^3(pi x) sin^2(pi y) cos(pi y)
///   u2 =  6 sin^2(pi x) sin^3(pi y) cos(pi x)
Eigen::Vector2d vortex_initial_velocity(const Point2& x);
Eigen::Matrix2d vortex_initial_velocity_gradient(const Point2& x);

}  // namespace twogrid
