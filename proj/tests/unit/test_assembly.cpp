#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twogrid/assembly.hpp"
#include "twogrid/exact_solutions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace twogrid;

namespace {

Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(gen);
  return v;
}

double symmetry_defect(const SparseMatrix& A) {
  return SparseMatrix(A - SparseMatrix(A.transpose())).norm() / A.norm();
}

}  // namespace

TEST_CASE("shapes, symmetry and definiteness") {
  for (Family family : {Family::Mini, Family::TaylorHood}) {
    const SpacePtr space = build_space(5, family);
    const OperatorSet ops = assemble_operators(*space);
    const int nu = space->num_velocity_dofs();
    const int np = space->num_pressure_dofs();
    CHECK(ops.M.rows() == nu);
    CHECK(ops.K.cols() == nu);
    CHECK(ops.B.rows() == np);
    CHECK(ops.B.cols() == nu);
    CHECK(ops.m_p.size() == np);
    CHECK(symmetry_defect(ops.M) < 1e-14);
    CHECK(symmetry_defect(ops.K) < 1e-14);
    for (unsigned seed = 0; seed < 5; ++seed) {
      const Eigen::VectorXd v = random_vector(nu, seed);
      CHECK(v.dot(ops.M * v) > 0.0);
      CHECK(v.dot(ops.K * v) > 0.0);
    }
    CHECK(ops.m_p.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("constant pressure lies in the kernel of B transpose") {
  for (Family family : {Family::Mini, Family::TaylorHood}) {
    const OperatorSet ops = assemble_operators(*build_space(6, family));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ops.B.rows());
    CHECK((ops.B.transpose() * ones).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pressure_gradient_functional(ops, ones)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stiffness energy of an interpolant") {
  const double pi = std::numbers::pi;
  const SpacePtr space = build_space(16, Family::Mini);
  const OperatorSet ops = assemble_operators(*space);
  const FEField v = interpolate_velocity(space, [pi](const Point2& x) -> Eigen::Vector2d {
    return {std::sin(pi * x(0)) * std::sin(pi * x(1)), 0.0};
  });
  const double energy = v.coeffs.dot(ops.K * v.coeffs);
  CHECK(std::abs(energy - pi * pi / 2.0) < 0.02 * pi * pi / 2.0);
  const double mass = v.coeffs.dot(ops.M * v.coeffs);
  CHECK(std::abs(mass - 0.25) < 0.02 * 0.25);
}

TEST_CASE("interpolant of a solenoidal field is nearly discretely solenoidal") {
  const SpacePtr space = build_space(4, Family::TaylorHood);
  const OperatorSet ops = assemble_operators(*space);
  const double pi = std::numbers::pi;
  const FEField v = interpolate_velocity(space, [pi](const Point2& x) -> Eigen::Vector2d {
    return manufactured::velocity(x, 1.0 / pi);
  });
  const double rel = (ops.B * v.coeffs).norm() / (ops.K * v.coeffs).norm();
  CHECK(rel < 0.05);
}

TEST_CASE("skew convection annihilates and agrees with the plain form for solenoidal wind") {
  const SpacePtr space = build_space(6, Family::Mini);
  auto wind = [](const Point2& x) { return manufactured::velocity(x, 0.5); };
  const SparseMatrix skew = assemble_convection(*space, wind, ConvectionMode::Skew);
  const SparseMatrix plain = assemble_convection(*space, wind, ConvectionMode::Plain);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Eigen::VectorXd v = random_vector(space->num_velocity_dofs(), seed);
    CHECK(std::abs(v.dot(skew * v)) <= 1e-12 * v.squaredNorm());
  }
  CHECK(SparseMatrix(skew + SparseMatrix(skew.transpose())).norm() <= 1e-13 * skew.norm());
  // Solenoidal wind with zero trace: C + C^T = 0 up to quadrature error of the
  // trigonometric wind.
  const double rel = SparseMatrix(skew - plain).norm() / plain.norm();
  CHECK(rel < 1e-4);

  // A compressible wind makes them differ.
  auto compressible = [](const Point2& x) -> Eigen::Vector2d { return {x(0) * x(0), 0.0}; };
  const SparseMatrix s2 = assemble_convection(*space, compressible, ConvectionMode::Skew);
  const SparseMatrix p2 = assemble_convection(*space, compressible, ConvectionMode::Plain);
  CHECK(SparseMatrix(s2 - p2).norm() / p2.norm() > 1e-2);
}

TEST_CASE("skew convection Jacobian matches finite differences") {
  for (Family family : {Family::Mini, Family::TaylorHood}) {
    const SpacePtr space = build_space(3, family);
    FEField u = FEField::zero_velocity(space);
    u.coeffs = random_vector(space->num_velocity_dofs(), 3);
    auto action = [&](const Eigen::VectorXd& c) -> Eigen::VectorXd {
      FEField w{space, FieldRole::Velocity, c};
      return assemble_convection(*space, wind_from_field(w), ConvectionMode::Skew) * c;
    };
    const SparseMatrix J = assemble_skew_convection_jacobian(*space, u);
    const Eigen::VectorXd dir = random_vector(space->num_velocity_dofs(), 4);
    const double h = 1e-6;
    const Eigen::VectorXd fd = (action(u.coeffs + h * dir) - action(u.coeffs - h * dir)) / (2 * h);
    const Eigen::VectorXd jd = J * dir;
    CHECK((fd - jd).norm() <= 1e-6 * jd.norm());
  }
}

TEST_CASE("load vector of a constant field") {
  const SpacePtr space = build_space(5, Family::Mini);
  const Eigen::VectorXd f = assemble_load(*space, [](const Point2&) { return Eigen::Vector2d(1.0, -2.0); });
  const int ns = space->num_scalar_dofs();
  const Eigen::VectorXd pressure_like = detail::assemble_p1_load_full(space->mesh(), [](const Point2&) { return 1.0; });
  CHECK(pressure_like.sum() == doctest::Approx(1.0).epsilon(1e-14));
  for (int v = 0; v < static_cast<int>(space->mesh().num_vertices()); ++v) {
    const int dof = space->vertex_dof(v);
    if (dof < 0) continue;
    CHECK(f(dof) == doctest::Approx(pressure_like(v)).epsilon(1e-13));
    CHECK(f(ns + dof) == doctest::Approx(-2.0 * pressure_like(v)).epsilon(1e-13));
  }
  // Each bubble integrates to 9/20 of its triangle's area.
  const int b = space->bubble_dof(0);
  CHECK(f(b) == doctest::Approx(9.0 / 20.0 * 0.5 / 25.0).epsilon(1e-13));
}

TEST_CASE("P1 helpers and block layout") {
  const StructuredTriMesh mesh = build_unit_square_mesh(3);
  const SparseMatrix m = detail::assemble_p1_mass_full(mesh);
  CHECK(Eigen::VectorXd(m * Eigen::VectorXd::Ones(m.cols())).sum() == doctest::Approx(1.0).epsilon(1e-14));
  const SparseMatrix two = detail::block_diagonal2(m);
  CHECK(two.rows() == 2 * m.rows());
  CHECK(two.nonZeros() == 2 * m.nonZeros());
  CHECK(two.coeff(m.rows(), m.cols()) == m.coeff(0, 0));
  CHECK(two.coeff(0, m.cols()) == 0.0);
}

TEST_CASE("coordinate dump") {
  const OperatorSet ops = assemble_operators(*build_space(2, Family::Mini));
  std::ostringstream os;
  write_matrix_coordinates(os, ops.M);
  std::istringstream in(os.str());
  std::string line;
  long lines = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int i = -1, j = -1;
    double value = 0.0;
    ls >> i >> j >> value;
    CHECK(!ls.fail());
    CHECK(value == ops.M.coeff(i, j));
    ++lines;
  }
  CHECK(lines == ops.M.nonZeros());
}
