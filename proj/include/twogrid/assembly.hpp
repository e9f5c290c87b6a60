#pragma once

#include "twogrid/fe_space.hpp"
#include "twogrid/quadrature.hpp"

#include <Eigen/Sparse>

#include <iosfwd>

namespace twogrid {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Linear operators of a velocity-pressure pair, restricted to free
/// velocity DOFs.
struct OperatorSet {
  SparseMatrix M;     ///< velocity mass, n_u x n_u
  SparseMatrix K;     ///< velocity stiffness (no viscosity), n_u x n_u
  SparseMatrix B;     ///< divergence, (psi_i, div phi_j), n_p x n_u
  Eigen::VectorXd m_p;  ///< integral of each pressure basis function
};

OperatorSet assemble_operators(const FESpace& space, int degree = kAssemblyQuadDegree);

/// The pressure-gradient pairing (grad p, phi) = -(p, div phi) for phi with
/// zero trace, i.e. -B^T p.
Eigen::VectorXd pressure_gradient_functional(const OperatorSet& ops, const Eigen::VectorXd& p);

enum class ConvectionMode {
  /// b(w; v, phi) realized as 1/2 [((w.grad) v, phi) - ((w.grad) phi, v)].
  Skew,
  /// ((w.grad) v, phi).
  Plain,
};

using WindFunction = VectorFunction;

/// Point-sampled wind from a velocity field on any mesh (value only).
WindFunction wind_from_field(const FEField& field);

/// Convection matrix for a given wind; block diagonal in the two velocity
/// components.
SparseMatrix assemble_convection(const FESpace& space, const WindFunction& wind, ConvectionMode mode,
                                 int degree = kAssemblyQuadDegree);

/// Derivative of u -> N_skew(u) u at u: N_skew(u) + (delta -> N_skew(delta) u).
/// u must live on `space`.
SparseMatrix assemble_skew_convection_jacobian(const FESpace& space, const FEField& u,
                                               int degree = kAssemblyQuadDegree);

/// Load vector (g, phi) over free velocity DOFs.
Eigen::VectorXd assemble_load(const FESpace& space, const VectorFunction& g,
                              int degree = kAssemblyQuadDegree);

/// Coordinate text dump, one "i j value" line per stored entry.
void write_matrix_coordinates(std::ostream& os, const SparseMatrix& matrix);

namespace detail {

/// Scalar P1 mass and load over every vertex (boundary included).
SparseMatrix assemble_p1_mass_full(const StructuredTriMesh& mesh);
Eigen::VectorXd assemble_p1_load_full(const StructuredTriMesh& mesh, const ScalarFunction& g);

/// [S 0; 0 S]
SparseMatrix block_diagonal2(const SparseMatrix& scalar);

}  // namespace detail

}  // namespace twogrid
