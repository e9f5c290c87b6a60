#pragma once

#include "twogrid/fe_space.hpp"
#include "twogrid/galerkin.hpp"
#include "twogrid/norms.hpp"

#include <iosfwd>
#include <vector>

namespace twogrid {

/// Header "method,H,h,nu,t,err_u_L2,err_u_H1,err_p_L2", one row per report,
/// floats as %.17e.
void write_errors_csv(std::ostream& os, const std::vector<ErrorReport>& reports);

/// "x,y,u1,u2" on a uniform samples x samples grid of [0,1]^2.
void write_velocity_grid_csv(std::ostream& os, const FEField& u, int samples);
/// "x,y,p" on a uniform grid.
void write_pressure_grid_csv(std::ostream& os, const FEField& p, int samples);

/// "t,energy,newton_iters,div_residual" per step.
void write_time_series_csv(std::ostream& os, const std::vector<StepRecord>& history);

/// Total variation of u1 sampled at `samples` equispaced points on y = 1/2.
double midline_total_variation(const FEField& u, int samples);

}  // namespace twogrid
