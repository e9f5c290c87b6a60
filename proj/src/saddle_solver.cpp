#include "twogrid/saddle_solver.hpp"

#include "twogrid/exceptions.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace twogrid {

SparseMatrix augmented_matrix(const SparseMatrix& A, const SparseMatrix& B,
                              const Eigen::VectorXd& m_p) {
  const auto nu = A.rows();
  const auto np = B.rows();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(A.nonZeros() + 2 * B.nonZeros() + 2 * np);
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int k = 0; k < B.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(B, k); it; ++it) {
      triplets.emplace_back(nu + it.row(), it.col(), -it.value());
      triplets.emplace_back(it.col(), nu + it.row(), -it.value());
    }
  }
  const auto last = nu + np;
  for (Eigen::Index i = 0; i < np; ++i) {
    if (m_p(i) == 0.0) continue;
    triplets.emplace_back(nu + i, last, m_p(i));
    triplets.emplace_back(last, nu + i, m_p(i));
  }
  SparseMatrix K(last + 1, last + 1);
  K.setFromTriplets(triplets.begin(), triplets.end());
  K.makeCompressed();
  return K;
}

namespace {

using LU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

Eigen::VectorXd solve_full(const SparseMatrix& K, const Eigen::VectorXd& rhs) {
  LU lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) {
    throw SolverError("solve_saddle: factorization failed (" + lu.lastErrorMessage() + ")");
  }
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw SolverError("solve_saddle: back substitution failed");
  }
  return x;
}

// Eliminates 2x2 diagonal blocks and factorizes the Schur complement on the
// remaining unknowns. Returns nothing when a block couples to another block
// or is too close to singular, so the caller can fall back to the full solve.
std::optional<Eigen::VectorXd> solve_condensed(const SparseMatrix& K, const Eigen::VectorXd& rhs,
                                               const std::vector<std::array<int, 2>>& blocks) {
  const auto n = static_cast<int>(K.rows());
  const auto nb = static_cast<int>(blocks.size());
  std::vector<int> slot(n, -1);
  for (int b = 0; b < nb; ++b) {
    for (int k = 0; k < 2; ++k) {
      const int i = blocks[b][k];
      if (i < 0 || i >= n || slot[i] != -1) return std::nullopt;
      slot[i] = 2 * b + k;
    }
  }
  std::vector<int> reduced(n, -1);
  int nr = 0;
  for (int i = 0; i < n; ++i) {
    if (slot[i] == -1) reduced[i] = nr++;
  }

  std::vector<Eigen::Matrix2d> diag(nb, Eigen::Matrix2d::Zero());
  std::vector<Eigen::Triplet<double>> trr, trb, tbr;
  trr.reserve(K.nonZeros());
  for (int c = 0; c < K.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(K, c); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int sr = slot[r], sc = slot[c];
      if (sr == -1 && sc == -1) {
        trr.emplace_back(reduced[r], reduced[c], it.value());
      } else if (sr == -1) {
        trb.emplace_back(reduced[r], sc, it.value());
      } else if (sc == -1) {
        tbr.emplace_back(sr, reduced[c], it.value());
      } else if (sr / 2 == sc / 2) {
        diag[sr / 2](sr % 2, sc % 2) += it.value();
      } else if (it.value() != 0.0) {
        return std::nullopt;
      }
    }
  }

  std::vector<Eigen::Triplet<double>> tinv;
  tinv.reserve(4 * nb);
  for (int b = 0; b < nb; ++b) {
    const Eigen::Matrix2d& D = diag[b];
    const double det = D.determinant();
    if (!(std::abs(det) > 1e-13 * D.cwiseAbs().maxCoeff() * D.cwiseAbs().maxCoeff())) {
      return std::nullopt;
    }
    const Eigen::Matrix2d Di = D.inverse();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) tinv.emplace_back(2 * b + i, 2 * b + j, Di(i, j));
    }
  }
  SparseMatrix Krr(nr, nr), Krb(nr, 2 * nb), Kbr(2 * nb, nr), Dinv(2 * nb, 2 * nb);
  Krr.setFromTriplets(trr.begin(), trr.end());
  Krb.setFromTriplets(trb.begin(), trb.end());
  Kbr.setFromTriplets(tbr.begin(), tbr.end());
  Dinv.setFromTriplets(tinv.begin(), tinv.end());

  Eigen::VectorXd rr(nr), rb(2 * nb);
  for (int i = 0; i < n; ++i) {
    if (slot[i] == -1) {
      rr(reduced[i]) = rhs(i);
    } else {
      rb(slot[i]) = rhs(i);
    }
  }
  const SparseMatrix KrbDinv = Krb * Dinv;
  SparseMatrix S = Krr - SparseMatrix(KrbDinv * Kbr);
  S.makeCompressed();
  const Eigen::VectorXd xr = solve_full(S, rr - KrbDinv * rb);
  const Eigen::VectorXd xb = Dinv * (rb - Kbr * xr);

  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = slot[i] == -1 ? xr(reduced[i]) : xb(slot[i]);
  if (!x.allFinite()) return std::nullopt;
  return x;
}

}  // namespace

std::vector<std::array<int, 2>> bubble_blocks(const FESpace& space) {
  std::vector<std::array<int, 2>> blocks;
  if (space.family() != Family::Mini) return blocks;
  const int ns = space.num_scalar_dofs();
  const int nt = static_cast<int>(space.mesh().num_triangles());
  blocks.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    const int b = space.bubble_dof(t);
    blocks.push_back({b, ns + b});
  }
  return blocks;
}

SaddleSolution solve_saddle(const SaddleSystem& system) {
  const auto nu = system.A.rows();
  const auto np = system.B.rows();
  if (system.A.cols() != nu || system.B.cols() != nu || system.m_p.size() != np ||
      system.f.size() != nu || (system.g.size() != 0 && system.g.size() != np)) {
    throw std::invalid_argument("solve_saddle: inconsistent block dimensions");
  }
  const SparseMatrix K = augmented_matrix(system.A, system.B, system.m_p);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + np + 1);
  rhs.head(nu) = system.f;
  if (system.g.size() != 0) rhs.segment(nu, np) = -system.g;

  Eigen::VectorXd x;
  if (!system.local_blocks.empty()) {
    if (auto condensed = solve_condensed(K, rhs, system.local_blocks)) x = std::move(*condensed);
  }
  double residual = 0.0;
  if (x.size() != 0) residual = (K * x - rhs).norm();
  if (x.size() == 0 || residual > 1e-10 * (1.0 + rhs.norm())) {
    x = solve_full(K, rhs);
  }
  residual = (K * x - rhs).norm();
  if (residual > 1e-10 * (1.0 + rhs.norm())) {
    std::ostringstream msg;
    msg << "solve_saddle: residual " << residual << " exceeds tolerance (rhs norm " << rhs.norm()
        << "); system is numerically singular";
    throw SolverError(msg.str());
  }
  SaddleSolution sol;
  sol.velocity = x.head(nu);
  sol.pressure = x.segment(nu, np);
  sol.multiplier = x(nu + np);
  sol.residual_norm = residual;
  return sol;
}

FieldPair solve_saddle_fields(const SpacePtr& space, const SaddleSystem& system) {
  SaddleSolution sol = solve_saddle(system);
  return {FEField{space, FieldRole::Velocity, std::move(sol.velocity)},
          FEField{space, FieldRole::Pressure, std::move(sol.pressure)}};
}

FEField leray_project(const FEField& velocity, const OperatorSet& ops,
                      const std::vector<std::array<int, 2>>& local_blocks) {
  if (velocity.role != FieldRole::Velocity) {
    throw std::invalid_argument("leray_project: expects a velocity field");
  }
  SaddleSystem system{ops.M, ops.B, ops.m_p, ops.M * velocity.coeffs, {}, local_blocks};
  SaddleSolution sol = solve_saddle(system);
  return FEField{velocity.space, FieldRole::Velocity, std::move(sol.velocity)};
}

FEField leray_project(const FEField& velocity) {
  return leray_project(velocity, assemble_operators(*velocity.space),
                       bubble_blocks(*velocity.space));
}

}  // namespace twogrid
