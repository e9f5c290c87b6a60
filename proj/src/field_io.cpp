#include "twogrid/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace twogrid {

namespace {

std::string sci(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17e", value);
  return buffer;
}

double grid_coordinate(int k, int samples) {
  return samples == 1 ? 0.5 : static_cast<double>(k) / (samples - 1);
}

}  // namespace

void write_errors_csv(std::ostream& os, const std::vector<ErrorReport>& reports) {
  os << "method,H,h,nu,t,err_u_L2,err_u_H1,err_p_L2\n";
  for (const auto& r : reports) {
    os << r.method << ',' << sci(r.H) << ',' << sci(r.h) << ',' << sci(r.nu) << ',' << sci(r.t)
       << ',' << sci(r.err_u_L2) << ',' << sci(r.err_u_H1) << ',' << sci(r.err_p_L2) << '\n';
  }
}

void write_velocity_grid_csv(std::ostream& os, const FEField& u, int samples) {
  if (samples < 1) throw std::invalid_argument("write_velocity_grid_csv: samples must be >= 1");
  os << "x,y,u1,u2\n";
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < samples; ++i) {
      const Point2 x(grid_coordinate(i, samples), grid_coordinate(j, samples));
      const Eigen::Vector2d v = eval_velocity(u, x, false).value;
      os << sci(x(0)) << ',' << sci(x(1)) << ',' << sci(v(0)) << ',' << sci(v(1)) << '\n';
    }
  }
}

void write_pressure_grid_csv(std::ostream& os, const FEField& p, int samples) {
  if (samples < 1) throw std::invalid_argument("write_pressure_grid_csv: samples must be >= 1");
  os << "x,y,p\n";
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < samples; ++i) {
      const Point2 x(grid_coordinate(i, samples), grid_coordinate(j, samples));
      os << sci(x(0)) << ',' << sci(x(1)) << ',' << sci(eval_pressure(p, x, false).value) << '\n';
    }
  }
}

void write_time_series_csv(std::ostream& os, const std::vector<StepRecord>& history) {
  os << "t,energy,newton_iters,div_residual\n";
  for (const auto& r : history) {
    os << sci(r.t) << ',' << sci(r.energy) << ',' << r.newton_iters << ',' << sci(r.div_residual)
       << '\n';
  }
}

double midline_total_variation(const FEField& u, int samples) {
  if (samples < 2) throw std::invalid_argument("midline_total_variation: need >= 2 samples");
  double tv = 0.0;
  double previous = eval_velocity(u, Point2(0.0, 0.5), false).value(0);
  for (int i = 1; i < samples; ++i) {
    const double current = eval_velocity(u, Point2(grid_coordinate(i, samples), 0.5), false).value(0);
    tv += std::abs(current - previous);
    previous = current;
  }
  return tv;
}

}  // namespace twogrid
