#include "twogrid/postprocess.hpp"

#include <stdexcept>

namespace twogrid {

std::string_view method_name(PostprocessMethod method) {
  return method == PostprocessMethod::OseenNew ? "oseen_new" : "stokes_standard";
}

namespace {

struct CoarseData {
  FEField wind;
  FEField wind_dot;
};

CoarseData prepare(const PostprocessRequest& request, std::vector<std::string>& warnings) {
  if (request.coarse == nullptr || !request.coarse->udot) {
    throw std::invalid_argument("postprocess: coarse state with a recovered time derivative required");
  }
  if (!request.fine) throw std::invalid_argument("postprocess: fine space missing");
  const GalerkinState& coarse = *request.coarse;
  if (request.fine->mesh_size() >= coarse.u.space->mesh_size()) {
    warnings.emplace_back("fine mesh is not finer than the coarse mesh");
  }
  const bool linear = request.use_linear_part && coarse.u.space->family() == Family::Mini;
  if (linear) return {linear_part(coarse.u), linear_part(*coarse.udot)};
  return {coarse.u, *coarse.udot};
}

VectorFunction forcing_at(const Forcing& f, double t) {
  if (!f) return [](const Point2&) -> Eigen::Vector2d { return Eigen::Vector2d::Zero(); };
  return [f, t](const Point2& x) { return f(x, t); };
}

}  // namespace

PostprocessResult postprocess_oseen(const PostprocessRequest& request) {
  PostprocessResult result;
  const CoarseData data = prepare(request, result.warnings);
  const FESpace& fine = *request.fine;
  const OperatorSet ops = assemble_operators(fine);
  const ConvectionMode mode = request.skew_convection ? ConvectionMode::Skew : ConvectionMode::Plain;
  SparseMatrix A = request.nu * ops.K;
  A += assemble_convection(fine, wind_from_field(data.wind), mode);

  const VectorFunction f = forcing_at(request.forcing, request.coarse->t);
  const FEField& wind_dot = data.wind_dot;
  const Eigen::VectorXd rhs = assemble_load(fine, [&](const Point2& x) -> Eigen::Vector2d {
    return f(x) - eval_velocity(wind_dot, x, false).value;
  });
  auto fields = solve_saddle_fields(
      request.fine, SaddleSystem{std::move(A), ops.B, ops.m_p, rhs, {}, bubble_blocks(fine)});
  result.u = std::move(fields.velocity);
  result.p = std::move(fields.pressure);
  return result;
}

PostprocessResult postprocess_stokes(const PostprocessRequest& request) {
  PostprocessResult result;
  const CoarseData data = prepare(request, result.warnings);
  const FESpace& fine = *request.fine;
  const OperatorSet ops = assemble_operators(fine);
  const VectorFunction f = forcing_at(request.forcing, request.coarse->t);
  const FEField& wind = data.wind;
  const FEField& wind_dot = data.wind_dot;
  const Eigen::VectorXd rhs = assemble_load(fine, [&](const Point2& x) -> Eigen::Vector2d {
    const VelocitySample w = eval_velocity(wind, x, true);
    return f(x) - eval_velocity(wind_dot, x, false).value - w.grad * w.value;
  });
  auto fields = solve_saddle_fields(
      request.fine, SaddleSystem{request.nu * ops.K, ops.B, ops.m_p, rhs, {}, bubble_blocks(fine)});
  result.u = std::move(fields.velocity);
  result.p = std::move(fields.pressure);
  return result;
}

PostprocessResult postprocess(const PostprocessRequest& request) {
  return request.method == PostprocessMethod::OseenNew ? postprocess_oseen(request)
                                                       : postprocess_stokes(request);
}

}  // namespace twogrid
