#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twogrid/exact_solutions.hpp"
#include "twogrid/exceptions.hpp"
#include "twogrid/galerkin.hpp"
#include "twogrid/norms.hpp"

#include <stdexcept>

using namespace twogrid;

namespace {

// Galerkin errors (linear part) at H=1/6, dt=0.01, T=0.5: regression values recorded from
// this implementation, not published numbers.
constexpr double kBaselineL2 = 1.32103288271638863e-01;
constexpr double kBaselineH1 = 2.91983869140537022e+00;
constexpr double kBaselineP = 1.66109830789110763e-01;

EvolutionConfig manufactured_config(double t_final) {
  EvolutionConfig c;
  c.nu = manufactured::kNu;
  c.dt = 0.01;
  c.t_final = t_final;
  c.forcing = manufactured::forcing_function(c.nu);
  return c;
}

VectorFunction exact_at(double t) {
  return [t](const Point2& x) { return manufactured::velocity(x, t); };
}

}  // namespace

TEST_CASE("step count") {
  EvolutionConfig c;
  c.dt = 0.01;
  c.t_final = 0.5;
  CHECK(c.num_steps() == 50);
  c.dt = 0.03;
  CHECK_THROWS_AS(c.num_steps(), std::invalid_argument);
  c.dt = 0.0;
  CHECK_THROWS_AS(c.num_steps(), std::invalid_argument);
}

TEST_CASE("initial state is discretely solenoidal") {
  const SpacePtr space = build_space(6, Family::Mini);
  GalerkinIntegrator integrator(space, manufactured_config(0.1));
  const GalerkinState s = integrator.initial_state(vortex_initial_velocity);
  CHECK(s.t == 0.0);
  CHECK(integrator.divergence_residual(s.u) < 1e-12);
  CHECK(s.p.coeffs.size() == space->num_pressure_dofs());
  CHECK(s.p.coeffs.norm() == 0.0);
}

TEST_CASE("unforced energy is non-increasing") {
  const SpacePtr space = build_space(8, Family::Mini);
  EvolutionConfig c;
  c.nu = 0.01;
  c.dt = 0.01;
  c.t_final = 0.2;
  std::vector<StepRecord> history;
  GalerkinIntegrator integrator(space, c);
  const double e0 = integrator.energy(integrator.initial_state(vortex_initial_velocity).u);
  evolve(vortex_initial_velocity, c, space, &history);
  REQUIRE(history.size() == 20u);
  double previous = e0;
  for (const StepRecord& r : history) {
    CHECK(r.energy <= previous * (1.0 + 1e-12));
    CHECK(r.div_residual < 1e-9);
    CHECK(r.newton_iters <= 5);
    previous = r.energy;
  }
  CHECK(history.back().t == doctest::Approx(0.2));
}

TEST_CASE("Stokes evolution decays and needs a single linear solve per step") {
  const SpacePtr space = build_space(6, Family::TaylorHood);
  EvolutionConfig c;
  c.nu = 0.1;
  c.dt = 0.05;
  c.t_final = 0.5;
  c.convection = false;
  std::vector<StepRecord> history;
  evolve(vortex_initial_velocity, c, space, &history);
  for (std::size_t k = 1; k < history.size(); ++k) {
    CHECK(history[k].energy < history[k - 1].energy);
    CHECK(history[k].newton_iters == 1);
  }
}

TEST_CASE("manufactured evolution at H=1/6") {
  const SpacePtr space = build_space(6, Family::Mini);
  const EvolutionConfig c = manufactured_config(0.5);
  std::vector<StepRecord> history;
  const GalerkinState s = evolve(exact_at(0.0), c, space, &history);
  REQUIRE(history.size() == 50u);
  for (const StepRecord& r : history) {
    CHECK(r.newton_iters <= 5);
    CHECK(r.div_residual < 1e-9);
  }
  REQUIRE(s.udot.has_value());
  const OperatorSet ops = assemble_operators(*space);
  CHECK((ops.B * s.udot->coeffs).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(ops.m_p.dot(s.p.coeffs)) < 1e-12);

  const ErrorReport r = compute_errors(linear_part(s.u), &s.p, manufactured::solution(), 0.5);
  CHECK(r.err_u_L2 == doctest::Approx(kBaselineL2).epsilon(1e-6));
  CHECK(r.err_u_H1 == doctest::Approx(kBaselineH1).epsilon(1e-6));
  CHECK(r.err_p_L2 == doctest::Approx(kBaselineP).epsilon(1e-6));

  // The recovered derivative approximates u_t = u(x, 1).
  const ErrorReport rd = compute_errors(*s.udot, nullptr, manufactured::solution(), 1.0);
  const ErrorReport scale = compute_errors(FEField::zero_velocity(space), nullptr, manufactured::solution(), 1.0);
  CHECK(rd.err_u_L2 < 0.2 * scale.err_u_L2);
}

TEST_CASE("time derivative recovery satisfies the momentum equation") {
  const SpacePtr space = build_space(5, Family::Mini);
  GalerkinIntegrator integrator(space, manufactured_config(0.1));
  GalerkinState s = integrator.initial_state(exact_at(0.3));
  s.t = 0.3;
  const TimeDerivative d = integrator.recover_time_derivative(s);
  const OperatorSet& ops = integrator.operators();
  const Eigen::VectorXd lhs = ops.M * d.udot.coeffs - ops.B.transpose() * d.pressure.coeffs;
  const Eigen::VectorXd rhs = integrator.momentum_rhs(s.u, s.t);
  CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
  CHECK((ops.B * d.udot.coeffs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single step helper matches the integrator") {
  const SpacePtr space = build_space(4, Family::Mini);
  const EvolutionConfig c = manufactured_config(0.1);
  GalerkinIntegrator integrator(space, c);
  const GalerkinState s0 = integrator.initial_state(exact_at(0.0));
  const GalerkinState a = integrator.step(s0);
  const GalerkinState b = step_trapezoid(s0, c);
  CHECK(a.t == doctest::Approx(0.01));
  CHECK((a.u.coeffs - b.u.coeffs).norm() == 0.0);
}

TEST_CASE("Newton failure is reported") {
  const SpacePtr space = build_space(4, Family::Mini);
  EvolutionConfig c = manufactured_config(0.1);
  c.newton_max_iter = 1;
  c.newton_tol = 1e-30;
  try {
    evolve(exact_at(0.0), c, space);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}
