#pragma once

#include "twogrid/assembly.hpp"
#include "twogrid/fe_space.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace twogrid {

/// f(x, t); an empty function means zero forcing.
using Forcing = std::function<Eigen::Vector2d(const Point2&, double)>;

struct EvolutionConfig {
  double nu = 0.05;
  double dt = 0.01;
  double t_final = 0.5;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  Forcing forcing;
  /// Drop the nonlinear term (Stokes evolution); used by tests.
  bool convection = true;

  /// Number of steps; throws std::invalid_argument unless dt divides
  /// t_final to 1e-12.
  int num_steps() const;
};

/// Coarse-mesh semidiscrete state at one time instant.
struct GalerkinState {
  double t = 0.0;
  FEField u;
  FEField p;
  std::optional<FEField> udot;
};

struct StepRecord {
  double t = 0.0;
  double energy = 0.0;
  int newton_iters = 0;
  double div_residual = 0.0;
};

struct TimeDerivative {
  FEField udot;
  /// Pressure consistent with the semidiscrete momentum equation at the
  /// state's velocity (instantaneous, mean zero).
  FEField pressure;
};

/// Semidiscrete Galerkin evolution on one space with the trapezoidal rule.
/// The linear operators are assembled once at construction.
class GalerkinIntegrator {
 public:
  GalerkinIntegrator(SpacePtr space, EvolutionConfig config);

  const SpacePtr& space() const { return space_; }
  const OperatorSet& operators() const { return ops_; }
  const EvolutionConfig& config() const { return config_; }

  /// Leray-projected nodal interpolant of u0 at t = 0, zero pressure.
  GalerkinState initial_state(const VectorFunction& u0) const;

  /// One trapezoidal step from state.t to state.t + dt. The step's pressure
  /// multiplier is stored as the new state's pressure. Throws NumericalError
  /// if Newton does not converge.
  GalerkinState step(const GalerkinState& state, StepRecord* record = nullptr) const;

  /// Solves M udot - B^T q = (f, phi) - nu K u - N_skew(u) u with B udot = 0.
  TimeDerivative recover_time_derivative(const GalerkinState& state) const;

  double energy(const FEField& u) const;
  double divergence_residual(const FEField& u) const;

  /// Residual of the semidiscrete momentum equation at (u, p, udot), used to
  /// check time-derivative recovery.
  Eigen::VectorXd momentum_rhs(const FEField& u, double t) const;

 private:
  Eigen::VectorXd load(double t) const;
  Eigen::VectorXd skew_action(const FEField& u) const;

  SpacePtr space_;
  EvolutionConfig config_;
  OperatorSet ops_;
  std::vector<std::array<int, 2>> blocks_;
};

GalerkinState step_trapezoid(const GalerkinState& state, const EvolutionConfig& config);

/// Projected initial data, config.num_steps() trapezoid steps, then the
/// recovered time derivative and instantaneous pressure at t_final.
GalerkinState evolve(const VectorFunction& u0, const EvolutionConfig& config, SpacePtr space,
                     std::vector<StepRecord>* history = nullptr);

}  // namespace twogrid
