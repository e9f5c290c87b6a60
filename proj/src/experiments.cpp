#include "twogrid/experiments.hpp"

#include "twogrid/exceptions.hpp"
#include "twogrid/field_io.hpp"
#include "twogrid/saddle_solver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twogrid {

namespace {

const char* const kQuantities[] = {"u_L2", "u_H1", "p_L2", "u1_L2", "u1_H1"};

double quantity(const ErrorReport& r, const std::string& name) {
  if (name == "u_L2") return r.err_u_L2;
  if (name == "u_H1") return r.err_u_H1;
  if (name == "p_L2") return r.err_p_L2;
  if (name == "u1_L2") return r.err_u1_L2;
  return r.err_u1_H1;
}

ErrorReport tagged(ErrorReport report, std::string method, double H, double h, double nu, double t) {
  report.method = std::move(method);
  report.H = H;
  report.h = h;
  report.nu = nu;
  report.t = t;
  return report;
}

}  // namespace

SlopeTable slopes_by_method(const std::vector<ErrorReport>& reports, bool use_coarse_size) {
  std::map<std::string, std::vector<const ErrorReport*>> by_method;
  for (const auto& r : reports) by_method[r.method].push_back(&r);
  SlopeTable table;
  for (const auto& [method, rows] : by_method) {
    if (rows.size() < 3) continue;
    for (const char* q : kQuantities) {
      std::vector<std::pair<double, double>> points;
      for (const ErrorReport* r : rows) {
        points.emplace_back(use_coarse_size ? r->H : r->h, quantity(*r, q));
      }
      bool positive = true;
      for (const auto& p : points) positive = positive && p.second > 0.0;
      if (positive) table.values[method + "/" + q] = slope_fit(points);
    }
  }
  return table;
}

ConvergenceResult run_experiment1(const ConvergenceConfig& config) {
  ConvergenceResult result;
  const ExactSolution exact = manufactured::solution();
  EvolutionConfig evo;
  evo.nu = config.nu;
  evo.dt = config.dt;
  evo.t_final = config.t_final;
  evo.forcing = manufactured::forcing_function(config.nu);
  const VectorFunction u0 = [](const Point2& x) { return manufactured::velocity(x, 0.0); };

  for (const auto& [nc, nf] : config.pairs) {
    const double H = 1.0 / nc;
    const double h = 1.0 / nf;
    ConvergenceLevel level;
    level.coarse = nc;
    level.fine = nf;
    GalerkinState coarse;
    const SpacePtr coarse_space = build_space(nc, Family::Mini);
    try {
      coarse = evolve(u0, evo, coarse_space, &level.history);
    } catch (const NumericalError& e) {
      throw NumericalError("H=1/" + std::to_string(nc) + ": " + e.what());
    }
    const OperatorSet coarse_ops = assemble_operators(*coarse_space);
    level.udot_div_residual = (coarse_ops.B * coarse.udot->coeffs).cwiseAbs().maxCoeff();

    const FEField coarse_linear = linear_part(coarse.u);
    result.reports.push_back(tagged(compute_errors(coarse_linear, &coarse.p, exact, coarse.t),
                                    "galerkin", H, h, config.nu, coarse.t));

    PostprocessRequest request;
    request.coarse = &coarse;
    request.fine = build_space(nf, Family::Mini);
    request.nu = config.nu;
    request.forcing = evo.forcing;
    request.method = PostprocessMethod::OseenNew;
    PostprocessResult post;
    try {
      post = postprocess_oseen(request);
    } catch (const NumericalError& e) {
      throw NumericalError("H=1/" + std::to_string(nc) + ", h=1/" + std::to_string(nf) + ": " +
                           e.what());
    }
    const OperatorSet fine_ops = assemble_operators(*request.fine);
    level.postprocess_div_residual = (fine_ops.B * post.u.coeffs).cwiseAbs().maxCoeff();
    result.reports.push_back(tagged(compute_errors(linear_part(post.u), &post.p, exact, coarse.t),
                                    "oseen_new", H, h, config.nu, coarse.t));
    result.levels.push_back(std::move(level));
  }
  result.slopes = slopes_by_method(result.reports);
  return result;
}

StokesMmsResult run_stokes_mms(const StokesMmsConfig& config) {
  StokesMmsResult result;
  const ExactSolution exact = manufactured::solution();
  const double t = config.t;
  const double nu = config.nu;
  const bool oseen = config.oseen;
  const std::string method = std::string(oseen ? "oseen_" : "stokes_") +
                             std::string(family_name(config.family));
  for (int n : config.levels) {
    const SpacePtr space = build_space(n, config.family);
    const OperatorSet ops = assemble_operators(*space);
    SparseMatrix A = nu * ops.K;
    if (oseen) {
      A += assemble_convection(
          *space, [t](const Point2& x) { return manufactured::velocity(x, t); },
          ConvectionMode::Plain);
    }
    const Eigen::VectorXd f = assemble_load(*space, [=](const Point2& x) {
      return manufactured::steady_forcing(x, t, nu, oseen);
    });
    const FieldPair sol = solve_saddle_fields(
        space, SaddleSystem{std::move(A), ops.B, ops.m_p, f, {}, bubble_blocks(*space)});
    result.div_residuals.push_back((ops.B * sol.velocity.coeffs).cwiseAbs().maxCoeff());
    result.reports.push_back(tagged(compute_errors(sol.velocity, &sol.pressure, exact, t), method,
                                    1.0 / n, 1.0 / n, nu, t));
  }
  result.slopes = slopes_by_method(result.reports);
  return result;
}

TemporalResult run_temporal_convergence(const TemporalConfig& config) {
  TemporalResult result;
  const SpacePtr space = build_space(config.coarse, Family::Mini);
  const VectorFunction u0 = [](const Point2& x) { return manufactured::velocity(x, 0.0); };
  std::vector<FEField> finals;
  for (int steps : config.steps_per_unit) {
    EvolutionConfig evo;
    evo.nu = config.nu;
    evo.dt = 1.0 / steps;
    evo.t_final = config.t_final;
    evo.forcing = manufactured::forcing_function(config.nu);
    std::vector<StepRecord> history;
    finals.push_back(evolve(u0, evo, space, &history).u);
    int max_iters = 0;
    for (const auto& r : history) max_iters = std::max(max_iters, r.newton_iters);
    result.max_newton_iters.push_back(max_iters);
  }
  const SparseMatrix M = assemble_operators(*space).M;
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
    const Eigen::VectorXd d = finals[k].coeffs - finals[k + 1].coeffs;
    result.differences.push_back(std::sqrt(d.dot(M * d)));
  }
  for (std::size_t k = 0; k + 1 < result.differences.size(); ++k) {
    result.orders.push_back(std::log2(result.differences[k] / result.differences[k + 1]));
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

std::string sci(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17e", value);
  return buffer;
}

std::filesystem::path oracle_cache_path(const OracleConfig& c) {
  char name[160];
  std::snprintf(name, sizeof name, "oracle_nu%.6g_T%.6g_n%d_dt%.6g.txt", c.nu, c.t_final, c.n_ref,
                c.dt);
  return std::filesystem::path(c.cache_dir) / name;
}

std::string oracle_key(const OracleConfig& c) {
  return sci(c.nu) + ' ' + sci(c.t_final) + ' ' + std::to_string(c.n_ref) + ' ' + sci(c.dt);
}

bool read_oracle(const std::filesystem::path& path, const OracleConfig& c, const SpacePtr& space,
                 GalerkinState& state) {
  std::ifstream in(path);
  if (!in) return false;
  std::string magic;
  std::getline(in, magic);
  std::string key;
  std::getline(in, key);
  if (magic != "twogrid-oracle v1" || key != oracle_key(c)) return false;
  long nu_dofs = -1;
  long np_dofs = -1;
  if (!(in >> nu_dofs >> np_dofs) || nu_dofs != space->num_velocity_dofs() ||
      np_dofs != space->num_pressure_dofs()) {
    return false;
  }
  state.u = FEField::zero_velocity(space);
  state.p = FEField::zero_pressure(space);
  double sum = 0.0;
  for (long k = 0; k < nu_dofs; ++k) {
    if (!(in >> state.u.coeffs(k))) return false;
    sum += state.u.coeffs(k);
  }
  for (long k = 0; k < np_dofs; ++k) {
    if (!(in >> state.p.coeffs(k))) return false;
    sum += state.p.coeffs(k);
  }
  std::string label;
  double checksum = 0.0;
  if (!(in >> label >> checksum) || label != "checksum") return false;
  if (!std::isfinite(sum) || std::abs(sum - checksum) > 1e-9 * (1.0 + std::abs(sum))) return false;
  state.t = c.t_final;
  return true;
}

void write_oracle(const std::filesystem::path& path, const OracleConfig& c,
                  const GalerkinState& state) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << "twogrid-oracle v1\n" << oracle_key(c) << '\n';
    out << state.u.coeffs.size() << ' ' << state.p.coeffs.size() << '\n';
    double sum = 0.0;
    for (Eigen::Index k = 0; k < state.u.coeffs.size(); ++k) {
      out << sci(state.u.coeffs(k)) << '\n';
      sum += state.u.coeffs(k);
    }
    for (Eigen::Index k = 0; k < state.p.coeffs.size(); ++k) {
      out << sci(state.p.coeffs(k)) << '\n';
      sum += state.p.coeffs(k);
    }
    out << "checksum " << sci(sum) << '\n';
  }
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace

GalerkinState reference_oracle(const OracleConfig& config, std::vector<StepRecord>* history) {
  const SpacePtr space = build_space(config.n_ref, Family::Mini);
  GalerkinState state;
  const bool cached = !config.cache_dir.empty();
  const auto path = cached ? oracle_cache_path(config) : std::filesystem::path();
  // A history request forces a fresh run so the per-step records exist.
  if (cached && history == nullptr && read_oracle(path, config, space, state)) return state;

  EvolutionConfig evo;
  evo.nu = config.nu;
  evo.dt = config.dt;
  evo.t_final = config.t_final;
  state = evolve(vortex_initial_velocity, evo, space, history);
  if (cached) write_oracle(path, config, state);
  return state;
}

const ErrorReport& CompareResult::report(const std::string& method) const {
  for (const auto& r : reports) {
    if (r.method == method) return r;
  }
  throw std::out_of_range("CompareResult: no report for " + method);
}

CompareResult run_experiment2(const CompareConfig& config) {
  CompareResult result;
  EvolutionConfig evo;
  evo.nu = config.nu;
  evo.dt = config.dt;
  evo.t_final = config.t_final;
  result.coarse = evolve(vortex_initial_velocity, evo, build_space(config.coarse, Family::Mini),
                         &result.coarse_history);

  OracleConfig oracle_config{config.nu, config.t_final, config.oracle_n, config.oracle_dt,
                             config.cache_dir};
  const GalerkinState oracle = reference_oracle(oracle_config);
  const FEField oracle_u = linear_part(oracle.u);

  const SpacePtr fine = build_space(config.fine, Family::Mini);
  const OperatorSet fine_ops = assemble_operators(*fine);
  PostprocessRequest request;
  request.coarse = &result.coarse;
  request.fine = fine;
  request.nu = config.nu;
  request.method = PostprocessMethod::StokesStandard;
  const PostprocessResult standard = postprocess_stokes(request);
  request.method = PostprocessMethod::OseenNew;
  const PostprocessResult oseen = postprocess_oseen(request);
  for (const PostprocessResult* r : {&standard, &oseen}) {
    result.max_postprocess_div_residual = std::max(
        result.max_postprocess_div_residual, (fine_ops.B * r->u.coeffs).cwiseAbs().maxCoeff());
  }

  const double H = 1.0 / config.coarse;
  const double h = 1.0 / config.fine;
  auto add = [&](const std::string& method, const FEField& u, const FEField& p, double hh) {
    const FEField lin = linear_part(u);
    result.reports.push_back(tagged(compute_field_differences(lin, &p, oracle_u, &oracle.p), method,
                                    H, hh, config.nu, config.t_final));
    result.midline_tv[method] = midline_total_variation(lin, std::max(config.dump_grid, 2));
    result.velocity_fields.emplace(method, lin);
    result.pressure_fields.emplace(method, p);
  };
  add("galerkin", result.coarse.u, result.coarse.p, H);
  add("stokes_standard", standard.u, standard.p, h);
  add("oseen_new", oseen.u, oseen.p, h);
  result.midline_tv["reference"] = midline_total_variation(oracle_u, std::max(config.dump_grid, 2));
  result.velocity_fields.emplace("reference", oracle_u);
  result.pressure_fields.emplace("reference", oracle.p);

  if (config.adequacy_n > 0) {
    OracleConfig coarser = oracle_config;
    coarser.n_ref = config.adequacy_n;
    const GalerkinState second = reference_oracle(coarser);
    result.oracle_difference_H1 =
        compute_field_differences(linear_part(second.u), nullptr, oracle_u, nullptr).err_u_H1;
  }
  return result;
}

}  // namespace twogrid
