#pragma once

#include "twogrid/assembly.hpp"
#include "twogrid/fe_space.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace twogrid {

/// Velocity-pressure system with a zero-mean pressure:
///
///   A u - B^T p          = f
///   B u          - m λ   = g
///         m^T p          = 0
///
/// where -B^T p is the discrete (grad p, phi) pairing. The scalar λ absorbs
/// any incompatibility of g with the constant pressure mode.
struct SaddleSystem {
  SparseMatrix A;
  SparseMatrix B;
  Eigen::VectorXd m_p;
  Eigen::VectorXd f;
  Eigen::VectorXd g;  ///< empty means zero
  /// Velocity index groups coupled only among themselves and to the
  /// remaining unknowns (Mini bubbles: one pair per triangle). They are
  /// eliminated element by element before factorization; empty solves the
  /// full system.
  std::vector<std::array<int, 2>> local_blocks;
};

struct SaddleSolution {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  double multiplier = 0.0;
  double residual_norm = 0.0;
};

/// Bubble index pairs (component 0, component 1) of a Mini space; empty for
/// TaylorHood.
std::vector<std::array<int, 2>> bubble_blocks(const FESpace& space);

/// Direct sparse LU on the augmented system. Throws SolverError when the
/// factorization fails or the residual check does not hold.
SaddleSolution solve_saddle(const SaddleSystem& system);

/// Solves and wraps the result as fields of `space`.
struct FieldPair {
  FEField velocity;
  FEField pressure;
};
FieldPair solve_saddle_fields(const SpacePtr& space, const SaddleSystem& system);

/// Closest element of the discretely divergence-free space in the mass norm.
FEField leray_project(const FEField& velocity, const OperatorSet& ops,
                      const std::vector<std::array<int, 2>>& local_blocks = {});
FEField leray_project(const FEField& velocity);

/// Assembled [[A, -B^T, 0], [-B, 0, m], [0, m^T, 0]] (symmetric when A is).
SparseMatrix augmented_matrix(const SparseMatrix& A, const SparseMatrix& B,
                              const Eigen::VectorXd& m_p);

}  // namespace twogrid
