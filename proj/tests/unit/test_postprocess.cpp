#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twogrid/exact_solutions.hpp"
#include "twogrid/norms.hpp"
#include "twogrid/postprocess.hpp"

#include <stdexcept>

using namespace twogrid;

namespace {

struct Coarse {
  GalerkinState state;
  EvolutionConfig config;
};

const Coarse& coarse_state() {
  static const Coarse c = [] {
    Coarse out;
    out.config.nu = manufactured::kNu;
    out.config.dt = 0.01;
    out.config.t_final = 0.5;
    out.config.forcing = manufactured::forcing_function(out.config.nu);
    out.state = evolve([](const Point2& x) { return manufactured::velocity(x, 0.0); }, out.config,
                       build_space(6, Family::Mini));
    return out;
  }();
  return c;
}

PostprocessRequest request(PostprocessMethod method, int fine) {
  PostprocessRequest r;
  r.coarse = &coarse_state().state;
  r.fine = build_space(fine, Family::Mini);
  r.nu = coarse_state().config.nu;
  r.forcing = coarse_state().config.forcing;
  r.method = method;
  return r;
}

}  // namespace

TEST_CASE("method names") {
  CHECK(method_name(PostprocessMethod::OseenNew) == "oseen_new");
  CHECK(method_name(PostprocessMethod::StokesStandard) == "stokes_standard");
}

TEST_CASE("outputs are discretely solenoidal on the fine mesh") {
  for (PostprocessMethod m : {PostprocessMethod::OseenNew, PostprocessMethod::StokesStandard}) {
    const PostprocessResult r = postprocess(request(m, 20));
    CHECK(r.warnings.empty());
    CHECK(r.u.space->mesh().n_subdiv == 20);
    const OperatorSet ops = assemble_operators(*r.u.space);
    CHECK((ops.B * r.u.coeffs).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(ops.m_p.dot(r.p.coeffs)) < 1e-12);
  }
}

TEST_CASE("postprocessing improves the coarse H1 error") {
  const ErrorReport coarse =
      compute_errors(coarse_state().state.u, &coarse_state().state.p, manufactured::solution(), 0.5);
  const PostprocessResult r = postprocess_oseen(request(PostprocessMethod::OseenNew, 20));
  const ErrorReport fine = compute_errors(r.u, &r.p, manufactured::solution(), 0.5);
  CHECK(fine.err_u_H1 < coarse.err_u_H1);
  CHECK(fine.err_p_L2 < coarse.err_p_L2);
}

TEST_CASE("variants") {
  PostprocessRequest a = request(PostprocessMethod::OseenNew, 12);
  PostprocessRequest b = a;
  b.skew_convection = true;
  PostprocessRequest c = a;
  c.use_linear_part = false;
  const FEField ua = postprocess(a).u;
  const FEField ub = postprocess(b).u;
  const FEField uc = postprocess(c).u;
  // The options change the discrete problem, but only slightly.
  const double na = ua.coeffs.norm();
  CHECK((ua.coeffs - ub.coeffs).norm() > 0.0);
  CHECK((ua.coeffs - ub.coeffs).norm() < 0.1 * na);
  CHECK((ua.coeffs - uc.coeffs).norm() > 0.0);
  CHECK((ua.coeffs - uc.coeffs).norm() < 0.1 * na);

  const PostprocessResult stokes = postprocess_stokes(request(PostprocessMethod::StokesStandard, 12));
  CHECK((stokes.u.coeffs - ua.coeffs).norm() > 0.0);
}

TEST_CASE("input validation") {
  PostprocessRequest r = request(PostprocessMethod::OseenNew, 6);
  const PostprocessResult same = postprocess(r);
  CHECK(same.warnings.size() == 1);

  GalerkinState no_derivative = coarse_state().state;
  no_derivative.udot.reset();
  r.coarse = &no_derivative;
  CHECK_THROWS_AS(postprocess(r), std::invalid_argument);
  r.coarse = nullptr;
  CHECK_THROWS_AS(postprocess(r), std::invalid_argument);
  r = request(PostprocessMethod::OseenNew, 12);
  r.fine = nullptr;
  CHECK_THROWS_AS(postprocess(r), std::invalid_argument);
}
