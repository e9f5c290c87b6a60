#pragma once

#include "twogrid/galerkin.hpp"
#include "twogrid/saddle_solver.hpp"

#include <string>
#include <vector>

namespace twogrid {

enum class PostprocessMethod { OseenNew, StokesStandard };

std::string_view method_name(PostprocessMethod method);

struct PostprocessRequest {
  const GalerkinState* coarse = nullptr;  ///< must carry udot
  SpacePtr fine;
  double nu = 0.05;
  Forcing forcing;
  PostprocessMethod method = PostprocessMethod::OseenNew;
  /// Replace the coarse velocity and its derivative by their linear parts
  /// (Mini coarse spaces only; ignored otherwise).
  bool use_linear_part = true;
  /// Skew instead of plain convection in the Oseen operator.
  bool skew_convection = false;
};

struct PostprocessResult {
  FEField u;
  FEField p;
  std::vector<std::string> warnings;
};

/// Fine-mesh Oseen problem with the coarse velocity as wind:
///   nu (grad u, grad phi) + ((w . grad) u, phi) + (grad p, phi) = (f - w_t, phi)
PostprocessResult postprocess_oseen(const PostprocessRequest& request);

/// Fine-mesh Stokes problem with explicit coarse convection in the data:
///   nu (grad u, grad phi) + (grad p, phi) = (f - w_t - (w . grad) w, phi)
PostprocessResult postprocess_stokes(const PostprocessRequest& request);

PostprocessResult postprocess(const PostprocessRequest& request);

}  // namespace twogrid
