#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twogrid/exact_solutions.hpp"
#include "twogrid/field_io.hpp"
#include "twogrid/norms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

using namespace twogrid;

TEST_CASE("norms of the manufactured solution against a zero field") {
  const double pi = std::numbers::pi;
  const SpacePtr space = build_space(16, Family::Mini);
  const double t = 0.5;
  const ErrorReport r = compute_errors(FEField::zero_velocity(space), nullptr, manufactured::solution(), t);
  // |u|^2 = pi^2 t^2 * 2 * (3/8)(1/2).
  const double l2 = std::sqrt(pi * pi * t * t * 3.0 / 8.0);
  CHECK(r.err_u_L2 == doctest::Approx(l2).epsilon(1e-10));
  CHECK(r.err_u1_L2 == doctest::Approx(l2 / std::sqrt(2.0)).epsilon(1e-10));
  // |grad u1|^2 integrates to pi^4 t^2 (1/4 + 3/4), and likewise for u2.
  const double semi = std::sqrt(2.0 * std::pow(pi, 4) * t * t);
  CHECK(r.err_u_H1_semi == doctest::Approx(semi).epsilon(1e-10));
  CHECK(r.err_u_H1 == doctest::Approx(std::hypot(l2, semi)).epsilon(1e-12));
  CHECK(r.err_p_L2 == 0.0);
}

TEST_CASE("pressure error ignores constants") {
  const SpacePtr space = build_space(5, Family::Mini);
  ExactSolution exact{
      [](const Point2&, double) { return Eigen::Vector2d::Zero().eval(); },
      [](const Point2&, double) { return Eigen::Matrix2d::Zero().eval(); },
      [](const Point2& x, double) { return x(0) + 2.0 * x(1); }};
  const FEField p = interpolate_pressure(space, [](const Point2& x) { return x(0) + 2.0 * x(1) + 7.0; });
  const ErrorReport r = compute_errors(FEField::zero_velocity(space), &p, exact, 0.0);
  CHECK(r.err_p_L2 < 1e-13);
  CHECK(r.err_u_L2 == 0.0);

  const FEField q = interpolate_pressure(space, [](const Point2& x) { return x(0) * x(0); });
  ExactSolution square = exact;
  square.pressure = [](const Point2& x, double) { return x(0) * x(0) - 5.0; };
  CHECK(compute_errors(FEField::zero_velocity(space), &q, square, 0.0).err_p_L2 > 1e-3);
}

TEST_CASE("field differences across nested and non-nested meshes") {
  auto lin = [](const Point2& x) { return 1.0 - x(0) + 3.0 * x(1); };
  const FEField a = interpolate_pressure(build_space(4, Family::Mini), lin);
  const FEField b = interpolate_pressure(build_space(6, Family::TaylorHood), lin);
  const FEField ua = interpolate_velocity(a.space, vortex_initial_velocity);
  const FEField ub = interpolate_velocity(b.space, vortex_initial_velocity);
  const ErrorReport d = compute_field_differences(ua, &a, ub, &b);
  CHECK(d.err_p_L2 < 1e-13);
  CHECK(d.err_u_L2 > 0.0);

  // A field against itself.
  const ErrorReport self = compute_field_differences(ub, &b, ub, &b);
  CHECK(self.err_u_H1 < 1e-14);

  // Without the common refinement the quadrature straddles kinks; close, not exact.
  const ErrorReport fallback = compute_field_differences(ua, &a, ub, &b, kErrorQuadDegree, 6);
  CHECK(fallback.err_u_L2 == doctest::Approx(d.err_u_L2).epsilon(0.05));
}

TEST_CASE("slope fit") {
  std::vector<std::pair<double, double>> one, two;
  for (double H : {1.0 / 6, 1.0 / 8, 1.0 / 10, 1.0 / 12}) {
    one.emplace_back(H, 3.0 * H);
    two.emplace_back(H, 0.5 * H * H);
  }
  CHECK(std::abs(slope_fit(one) - 1.0) < 1e-12);
  CHECK(std::abs(slope_fit(two) - 2.0) < 1e-12);
  CHECK_THROWS_AS(slope_fit({{0.5, 1.0}, {0.25, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(slope_fit({{0.5, 1.0}, {0.25, 0.0}, {0.125, 0.1}}), std::invalid_argument);
}

TEST_CASE("error CSV format") {
  ErrorReport r;
  r.method = "galerkin";
  r.H = 1.0 / 6;
  r.h = 0.05;
  r.nu = 0.05;
  r.t = 0.5;
  r.err_u_L2 = 0.1;
  r.err_u_H1 = 1.0 / 3;
  r.err_p_L2 = 2e-3;
  std::ostringstream os;
  write_errors_csv(os, {r});
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "method,H,h,nu,t,err_u_L2,err_u_H1,err_p_L2");
  CHECK(row.rfind("galerkin,1.66666666666666657e-01,", 0) == 0);
  CHECK(row.find("3.33333333333333315e-01") != std::string::npos);
}

TEST_CASE("grid and time series dumps") {
  const SpacePtr space = build_space(4, Family::Mini);
  const FEField u = interpolate_velocity(space, vortex_initial_velocity);
  std::ostringstream vel, pres, series;
  write_velocity_grid_csv(vel, u, 3);
  write_pressure_grid_csv(pres, FEField::zero_pressure(space), 3);
  write_time_series_csv(series, {{0.1, 2.0, 3, 1e-14}});
  CHECK(vel.str().rfind("x,y,u1,u2\n", 0) == 0);
  CHECK(pres.str().rfind("x,y,p\n", 0) == 0);
  CHECK(series.str().rfind("t,energy,newton_iters,div_residual\n", 0) == 0);
  long lines = 0;
  for (char c : vel.str()) lines += c == '\n';
  CHECK(lines == 1 + 9);

  // u1 of the vortex along y = 1/2 is zero (cos(pi/2) = 0), up to interpolation.
  CHECK(midline_total_variation(u, 101) < 1e-12);
}
