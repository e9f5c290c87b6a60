#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twogrid/fe_space.hpp"

#include <random>
#include <set>
#include <stdexcept>

using namespace twogrid;

TEST_CASE("DOF counts") {
  const int n = 4;
  const SpacePtr mini = build_space(n, Family::Mini);
  CHECK(mini->local_size() == 4);
  CHECK(mini->num_scalar_dofs() == 9 + 32);
  CHECK(mini->num_velocity_dofs() == 2 * 41);
  CHECK(mini->num_pressure_dofs() == 25);

  const SpacePtr th = build_space(n, Family::TaylorHood);
  CHECK(th->local_size() == 6);
  CHECK(th->num_scalar_dofs() == 9 + (56 - 16));
  CHECK(th->num_pressure_dofs() == 25);
  CHECK(family_name(Family::Mini) == "mini");
  CHECK(family_name(Family::TaylorHood) == "taylor-hood");
}

TEST_CASE_TEMPLATE_DEFINE("local to global map", T, local_map) {
  const Family family = T::value;
  const SpacePtr space = build_space(5, family);
  const auto& mesh = space->mesh();
  std::set<int> seen;
  int bubbles = 0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangles[t][k];
      CHECK(space->scalar_dof(t, k) == space->vertex_dof(v));
      CHECK((space->vertex_dof(v) < 0) == static_cast<bool>(mesh.boundary_vertex[v]));
    }
    for (int k = 3; k < space->local_size(); ++k) {
      const int dof = space->scalar_dof(t, k);
      if (family == Family::Mini) {
        CHECK(dof == space->bubble_dof(t));
        CHECK(space->is_bubble_dof(dof));
        ++bubbles;
      } else {
        const int e = mesh.triangle_edges[t][k - 3];
        CHECK(dof == space->edge_dof(e));
        CHECK((dof < 0) == static_cast<bool>(mesh.boundary_edge[e]));
      }
    }
    for (int k = 0; k < space->local_size(); ++k) {
      const int dof = space->scalar_dof(t, k);
      CHECK(dof < space->num_scalar_dofs());
      if (dof >= 0) seen.insert(dof);
    }
  }
  CHECK(static_cast<int>(seen.size()) == space->num_scalar_dofs());
  if (family == Family::Mini) CHECK(bubbles == static_cast<int>(mesh.num_triangles()));
}
TEST_CASE_TEMPLATE_INVOKE(local_map, std::integral_constant<Family, Family::Mini>,
                          std::integral_constant<Family, Family::TaylorHood>);

TEST_CASE("pressure interpolation reproduces linear functions") {
  const SpacePtr space = build_space(3, Family::Mini);
  const FEField p = interpolate_pressure(space, [](const Point2& x) { return 1.0 + 2.0 * x(0) - 3.0 * x(1); });
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 100; ++s) {
    const Point2 x(unit(gen), unit(gen));
    const PressureSample ps = eval_pressure(p, x);
    CHECK(ps.value == doctest::Approx(1.0 + 2.0 * x(0) - 3.0 * x(1)).epsilon(1e-13));
    CHECK((ps.grad - Eigen::Vector2d(2.0, -3.0)).norm() < 1e-12);
  }
  CHECK(pressure_mean(p) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(pressure_mean(normalize_pressure(p))) < 1e-14);
}

TEST_CASE("velocity interpolation matches at nodes") {
  auto u = [](const Point2& x) -> Eigen::Vector2d {
    return {x(0) * (1 - x(0)) * x(1) * (1 - x(1)), std::sin(3.0 * x(0)) * x(1) * (1 - x(1)) * (1 - x(0))};
  };
  for (Family family : {Family::Mini, Family::TaylorHood}) {
    const SpacePtr space = build_space(6, family);
    const FEField f = interpolate_velocity(space, u);
    const auto& mesh = space->mesh();
    for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v) {
      const Eigen::Vector2d expected = mesh.boundary_vertex[v] ? Eigen::Vector2d::Zero() : u(mesh.vertices[v]);
      CHECK((eval_velocity(f, mesh.vertices[v], false).value - expected).norm() < 1e-14);
    }
    if (family == Family::TaylorHood) {
      for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
        if (mesh.boundary_edge[e]) continue;
        CHECK((eval_velocity(f, mesh.edge_midpoints[e], false).value - u(mesh.edge_midpoints[e])).norm() < 1e-14);
      }
    }
  }
}

TEST_CASE("local evaluation matches point evaluation and gradients match differences") {
  const SpacePtr space = build_space(4, Family::Mini);
  FEField f = FEField::zero_velocity(space);
  std::mt19937 gen(5);
  std::normal_distribution<double> normal;
  for (int i = 0; i < f.coeffs.size(); ++i) f.coeffs(i) = normal(gen);
  const int t = 13;
  const Barycentric l(0.2, 0.3, 0.5);
  const Point2 x = barycentric_to_cartesian(space->mesh(), t, l);
  const VelocitySample a = eval_velocity_local(f, t, l);
  const VelocitySample b = eval_velocity(f, x);
  CHECK((a.value - b.value).norm() < 1e-13);
  CHECK((a.grad - b.grad).norm() < 1e-12);

  const double h = 1e-7;
  for (int d = 0; d < 2; ++d) {
    Point2 xp = x, xm = x;
    xp(d) += h;
    xm(d) -= h;
    const Eigen::Vector2d fd = (eval_velocity(f, xp, false).value - eval_velocity(f, xm, false).value) / (2 * h);
    CHECK((fd - a.grad.col(d)).norm() < 1e-6 * (1.0 + a.grad.norm()));
  }
}

TEST_CASE("linear part drops bubbles") {
  const SpacePtr space = build_space(3, Family::Mini);
  FEField f = FEField::zero_velocity(space);
  f.coeffs.setOnes();
  const FEField lin = linear_part(f);
  const int ns = space->num_scalar_dofs();
  for (int i = 0; i < ns; ++i) {
    const double expected = space->is_bubble_dof(i) ? 0.0 : 1.0;
    CHECK(lin.coeffs(i) == expected);
    CHECK(lin.coeffs(ns + i) == expected);
  }
  CHECK_THROWS_AS(linear_part(FEField::zero_velocity(build_space(3, Family::TaylorHood))), std::invalid_argument);
  CHECK_THROWS_AS(linear_part(FEField::zero_pressure(space)), std::invalid_argument);
}

TEST_CASE("shape evaluation sizes") {
  for (Family family : {Family::Mini, Family::TaylorHood}) {
    const SpacePtr space = build_space(2, family);
    Eigen::VectorXd values;
    Eigen::MatrixX3d grad;
    space->eval_local_shapes(Barycentric::Constant(1.0 / 3.0), values, grad);
    CHECK(values.size() == space->local_size());
    CHECK(grad.rows() == space->local_size());
    // Vertex-and-edge (or vertex-only) parts form a partition of unity.
    const int nlin = family == Family::Mini ? 3 : 6;
    CHECK(values.head(nlin).sum() == doctest::Approx(1.0));
  }
}
