#pragma once

#include "twogrid/exact_solutions.hpp"
#include "twogrid/galerkin.hpp"
#include "twogrid/norms.hpp"
#include "twogrid/postprocess.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace twogrid {

/// Least-squares convergence orders keyed by method and quantity
/// ("u_L2", "u_H1", "p_L2", "u1_L2", "u1_H1").
struct SlopeTable {
  std::map<std::string, double> values;

  double at(const std::string& method, const std::string& quantity) const {
    return values.at(method + "/" + quantity);
  }
};

SlopeTable slopes_by_method(const std::vector<ErrorReport>& reports, bool use_coarse_size = true);

// ---------------------------------------------------------------------------
// Manufactured-solution convergence of the two-grid method.

struct ConvergenceConfig {
  /// (1/H, 1/h) pairs.
  std::vector<std::pair<int, int>> pairs{{6, 20}, {8, 26}, {10, 32}, {12, 36}};
  double nu = manufactured::kNu;
  double t_final = 0.5;
  double dt = 0.01;
};

struct ConvergenceLevel {
  int coarse = 0;
  int fine = 0;
  std::vector<StepRecord> history;
  double postprocess_div_residual = 0.0;
  double udot_div_residual = 0.0;
};

struct ConvergenceResult {
  /// Per pair, in the configured order: "galerkin" then "oseen_new".
  std::vector<ErrorReport> reports;
  std::vector<ConvergenceLevel> levels;
  SlopeTable slopes;
};

ConvergenceResult run_experiment1(const ConvergenceConfig& config);

// ---------------------------------------------------------------------------
// Steady Stokes (or Oseen with the exact wind) manufactured convergence.

struct StokesMmsConfig {
  Family family = Family::Mini;
  std::vector<int> levels{8, 16, 32};
  double nu = manufactured::kNu;
  /// Time at which the manufactured solution is frozen.
  double t = 0.5;
  bool oseen = false;
};

struct StokesMmsResult {
  std::vector<ErrorReport> reports;
  std::vector<double> div_residuals;
  SlopeTable slopes;
};

StokesMmsResult run_stokes_mms(const StokesMmsConfig& config);

// ---------------------------------------------------------------------------
// Temporal self-convergence of the trapezoidal evolution.

struct TemporalConfig {
  int coarse = 10;
  std::vector<int> steps_per_unit{40, 80, 160};
  double nu = manufactured::kNu;
  double t_final = 0.5;
};

struct TemporalResult {
  /// Mass-norm differences of consecutive refinements.
  std::vector<double> differences;
  /// log2 of consecutive difference ratios.
  std::vector<double> orders;
  std::vector<int> max_newton_iters;
};

TemporalResult run_temporal_convergence(const TemporalConfig& config);

// ---------------------------------------------------------------------------
// Vortex comparison of Galerkin, standard and new postprocessing.

struct OracleConfig {
  double nu = 0.01;
  double t_final = 0.5;
  int n_ref = 40;
  double dt = 1.0 / 400.0;
  /// Empty disables caching.
  std::string cache_dir = "twogrid_cache";
};

/// Fine-mesh Mini Galerkin evolution of the vortex problem. Cached on disk
/// keyed by (nu, t_final, n_ref, dt); unreadable or mismatched cache files
/// are recomputed.
GalerkinState reference_oracle(const OracleConfig& config, std::vector<StepRecord>* history = nullptr);

struct CompareConfig {
  double nu = 0.01;
  int coarse = 10;
  int fine = 30;
  double t_final = 0.5;
  double dt = 1.0 / 200.0;
  int dump_grid = 101;
  int oracle_n = 40;
  double oracle_dt = 1.0 / 400.0;
  /// Second oracle resolution for the adequacy ratio; 0 disables it.
  int adequacy_n = 32;
  std::string cache_dir = "twogrid_cache";
};

struct CompareResult {
  /// "galerkin", "stokes_standard", "oseen_new", errors against the oracle
  /// (linear parts throughout).
  std::vector<ErrorReport> reports;
  std::map<std::string, double> midline_tv;
  /// H1 distance between the linear parts of the two oracle resolutions;
  /// negative when not computed.
  double oracle_difference_H1 = -1.0;
  std::vector<StepRecord> coarse_history;
  std::vector<StepRecord> oracle_history;
  double max_postprocess_div_residual = 0.0;
  GalerkinState coarse;
  std::map<std::string, FEField> velocity_fields;
  std::map<std::string, FEField> pressure_fields;

  const ErrorReport& report(const std::string& method) const;
};

CompareResult run_experiment2(const CompareConfig& config);

}  // namespace twogrid
