#include "twogrid/exact_solutions.hpp"

#include <cmath>
#include <numbers>

namespace twogrid {

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace manufactured {

Eigen::Vector2d velocity(const Point2& x, double t) {
  const double sx = std::sin(kPi * x(0));
  const double sy = std::sin(kPi * x(1));
  return {kPi * t * sx * sx * std::sin(2 * kPi * x(1)),
          -kPi * t * sy * sy * std::sin(2 * kPi * x(0))};
}

Eigen::Matrix2d velocity_gradient(const Point2& x, double t) {
  const double sx = std::sin(kPi * x(0));
  const double sy = std::sin(kPi * x(1));
  const double s2x = std::sin(2 * kPi * x(0));
  const double s2y = std::sin(2 * kPi * x(1));
  const double c2x = std::cos(2 * kPi * x(0));
  const double c2y = std::cos(2 * kPi * x(1));
  const double pi2t = kPi * kPi * t;
  Eigen::Matrix2d g;
  g << pi2t * s2x * s2y, 2 * pi2t * sx * sx * c2y,
      -2 * pi2t * sy * sy * c2x, -pi2t * s2x * s2y;
  return g;
}

Eigen::Vector2d velocity_laplacian(const Point2& x, double t) {
  const double sx = std::sin(kPi * x(0));
  const double sy = std::sin(kPi * x(1));
  const double s2x = std::sin(2 * kPi * x(0));
  const double s2y = std::sin(2 * kPi * x(1));
  const double c = 2 * kPi * kPi * kPi * t;
  return {c * s2y * (1.0 - 4.0 * sx * sx), -c * s2x * (1.0 - 4.0 * sy * sy)};
}

Eigen::Vector2d velocity_time_derivative(const Point2& x, double t) {
  (void)t;
  return velocity(x, 1.0);
}

double pressure(const Point2& x, double t) { return 20.0 * t * x(0) * x(0) * x(1); }

Eigen::Vector2d pressure_gradient(const Point2& x, double t) {
  return {40.0 * t * x(0) * x(1), 20.0 * t * x(0) * x(0)};
}

Eigen::Vector2d forcing(const Point2& x, double t, double nu) {
  const Eigen::Vector2d u = velocity(x, t);
  return velocity_time_derivative(x, t) - nu * velocity_laplacian(x, t) +
         velocity_gradient(x, t) * u + pressure_gradient(x, t);
}

Eigen::Vector2d steady_forcing(const Point2& x, double t, double nu, bool with_convection) {
  Eigen::Vector2d f = -nu * velocity_laplacian(x, t) + pressure_gradient(x, t);
  if (with_convection) f += velocity_gradient(x, t) * velocity(x, t);
  return f;
}

ExactSolution solution() {
  return {velocity, velocity_gradient, pressure};
}

Forcing forcing_function(double nu) {
  return [nu](const Point2& x, double t) { return forcing(x, t, nu); };
}

}  // namespace manufactured

Eigen::Vector2d vortex_initial_velocity(const Point2& x) {
  const double sx = std::sin(kPi * x(0));
  const double sy = std::sin(kPi * x(1));
  const double cx = std::cos(kPi * x(0));
  const double cy = std::cos(kPi * x(1));
  return {-6.0 * sx * sx * sx * sy * sy * cy, 6.0 * sx * sx * sy * sy * sy * cx};
}

Eigen::Matrix2d vortex_initial_velocity_gradient(const Point2& x) {
  const double sx = std::sin(kPi * x(0));
  const double sy = std::sin(kPi * x(1));
  const double cx = std::cos(kPi * x(0));
  const double cy = std::cos(kPi * x(1));
  Eigen::Matrix2d g;
  // d/dy [sy^2 cy] = pi (2 sy cy^2 - sy^3); d/dx [sx^2 cx] = pi (2 sx cx^2 - sx^3)
  g(0, 0) = -18.0 * kPi * sx * sx * cx * sy * sy * cy;
  g(0, 1) = -6.0 * kPi * sx * sx * sx * (2.0 * sy * cy * cy - sy * sy * sy);
  g(1, 0) = 6.0 * kPi * sy * sy * sy * (2.0 * sx * cx * cx - sx * sx * sx);
  g(1, 1) = 18.0 * kPi * sx * sx * cx * sy * sy * cy;
  return g;
}

}  // namespace twogrid
