#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twogrid {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quadrature moments, partition of unity, Kronecker property, bubble
/// vanishing, finite-difference gradients.
std::vector<CheckResult> element_checks();

/// Skew-form annihilation, B^T 1 = 0, stiffness/mass symmetry, discrete
/// divergence after a short evolution and a postprocess.
std::vector<CheckResult> structure_checks();

/// Runs every check above plus a small Mini Stokes convergence study and
/// prints one line per check. Returns true when all pass.
bool run_selftest(std::ostream& os);

}  // namespace twogrid
