#include "twogrid/galerkin.hpp"

#include "twogrid/exceptions.hpp"
#include "twogrid/saddle_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace twogrid {

int EvolutionConfig::num_steps() const {
  if (!(dt > 0.0) || !(t_final > 0.0) || !(nu > 0.0)) {
    throw std::invalid_argument("EvolutionConfig: nu, dt and t_final must be positive");
  }
  const double ratio = t_final / dt;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(steps * dt - t_final) > 1e-12) {
    throw std::invalid_argument("EvolutionConfig: dt must divide t_final");
  }
  return static_cast<int>(steps);
}

GalerkinIntegrator::GalerkinIntegrator(SpacePtr space, EvolutionConfig config)
    : space_(std::move(space)), config_(std::move(config)), ops_(assemble_operators(*space_)),
      blocks_(bubble_blocks(*space_)) {}

GalerkinState GalerkinIntegrator::initial_state(const VectorFunction& u0) const {
  GalerkinState state;
  state.t = 0.0;
  state.u = leray_project(interpolate_velocity(space_, u0), ops_, blocks_);
  state.p = FEField::zero_pressure(space_);
  return state;
}

Eigen::VectorXd GalerkinIntegrator::load(double t) const {
  if (!config_.forcing) return Eigen::VectorXd::Zero(space_->num_velocity_dofs());
  const Forcing& f = config_.forcing;
  return assemble_load(*space_, [&f, t](const Point2& x) { return f(x, t); });
}

Eigen::VectorXd GalerkinIntegrator::skew_action(const FEField& u) const {
  if (!config_.convection) return Eigen::VectorXd::Zero(space_->num_velocity_dofs());
  const SparseMatrix N = assemble_convection(*space_, wind_from_field(u), ConvectionMode::Skew);
  return N * u.coeffs;
}

double GalerkinIntegrator::energy(const FEField& u) const {
  return 0.5 * u.coeffs.dot(ops_.M * u.coeffs);
}

double GalerkinIntegrator::divergence_residual(const FEField& u) const {
  const Eigen::VectorXd div = ops_.B * u.coeffs;
  return div.size() == 0 ? 0.0 : div.cwiseAbs().maxCoeff();
}

Eigen::VectorXd GalerkinIntegrator::momentum_rhs(const FEField& u, double t) const {
  return load(t) - config_.nu * (ops_.K * u.coeffs) - skew_action(u);
}

GalerkinState GalerkinIntegrator::step(const GalerkinState& state, StepRecord* record) const {
  const double dt = config_.dt;
  const double nu = config_.nu;
  const double t_new = state.t + dt;
  const Eigen::VectorXd& u_old = state.u.coeffs;

  const Eigen::VectorXd explicit_half =
      nu * (ops_.K * u_old) + skew_action(state.u);
  const Eigen::VectorXd rhs =
      (ops_.M * u_old) / dt - 0.5 * explicit_half + 0.5 * (load(state.t) + load(t_new));
  const double rhs_scale = 1.0 + rhs.norm();

  // R(u) = M u / dt + 1/2 (nu K u + N(u) u) - rhs; the step solves R(u) - B^T p = 0.
  auto residual = [&](const FEField& u) -> Eigen::VectorXd {
    return (ops_.M * u.coeffs) / dt + 0.5 * (nu * (ops_.K * u.coeffs) + skew_action(u)) - rhs;
  };

  const SparseMatrix linear_part = SparseMatrix(ops_.M / dt) + SparseMatrix((0.5 * nu) * ops_.K);
  GalerkinState next;
  next.t = t_new;
  next.u = state.u;
  double last_norm = 0.0;
  for (int iter = 1; iter <= config_.newton_max_iter; ++iter) {
    SparseMatrix jacobian = linear_part;
    if (config_.convection) {
      jacobian += 0.5 * assemble_skew_convection_jacobian(*space_, next.u);
    }
    const Eigen::VectorXd r = residual(next.u);
    SaddleSystem system{std::move(jacobian), ops_.B, ops_.m_p, -r, -(ops_.B * next.u.coeffs), blocks_};
    const SaddleSolution sol = solve_saddle(system);
    next.u.coeffs += sol.velocity;
    next.p = FEField{space_, FieldRole::Pressure, sol.pressure};

    const Eigen::VectorXd full = residual(next.u) - ops_.B.transpose() * sol.pressure;
    last_norm = full.norm();
    if (last_norm <= config_.newton_tol * rhs_scale) {
      if (record) {
        record->t = t_new;
        record->energy = energy(next.u);
        record->newton_iters = iter;
        record->div_residual = divergence_residual(next.u);
      }
      return next;
    }
  }
  std::ostringstream msg;
  msg << "Newton did not converge at t=" << t_new << " after " << config_.newton_max_iter
      << " iterations (residual " << last_norm << ")";
  throw NumericalError(msg.str());
}

TimeDerivative GalerkinIntegrator::recover_time_derivative(const GalerkinState& state) const {
  SaddleSystem system{ops_.M, ops_.B, ops_.m_p, momentum_rhs(state.u, state.t), {}, blocks_};
  SaddleSolution sol = solve_saddle(system);
  return {FEField{space_, FieldRole::Velocity, std::move(sol.velocity)},
          FEField{space_, FieldRole::Pressure, std::move(sol.pressure)}};
}

GalerkinState step_trapezoid(const GalerkinState& state, const EvolutionConfig& config) {
  return GalerkinIntegrator(state.u.space, config).step(state);
}

GalerkinState evolve(const VectorFunction& u0, const EvolutionConfig& config, SpacePtr space,
                     std::vector<StepRecord>* history) {
  const int steps = config.num_steps();
  GalerkinIntegrator integrator(std::move(space), config);
  GalerkinState state = integrator.initial_state(u0);
  for (int k = 0; k < steps; ++k) {
    StepRecord record;
    try {
      state = integrator.step(state, &record);
    } catch (const NumericalError& e) {
      throw NumericalError("step " + std::to_string(k + 1) + ": " + e.what());
    }
    state.t = (k + 1) * config.dt;
    record.t = state.t;
    if (history) history->push_back(record);
  }
  TimeDerivative derivative = integrator.recover_time_derivative(state);
  state.udot = std::move(derivative.udot);
  state.p = std::move(derivative.pressure);
  return state;
}

}  // namespace twogrid
