#include "twogrid/assembly.hpp"

#include <ostream>
#include <vector>

namespace twogrid {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Shape tables of a space's scalar basis at the points of a rule.
struct Tabulation {
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::MatrixX3d> grad_bary;
};

Tabulation tabulate(const FESpace& space, const QuadRule& rule) {
  Tabulation tab;
  tab.values.resize(rule.size());
  tab.grad_bary.resize(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    space.eval_local_shapes(rule.points[q], tab.values[q], tab.grad_bary[q]);
  }
  return tab;
}

void scatter_scalar(const FESpace& space, int t, const Eigen::MatrixXd& local, Triplets& out) {
  const int nloc = space.local_size();
  for (int a = 0; a < nloc; ++a) {
    const int row = space.scalar_dof(t, a);
    if (row < 0) continue;
    for (int b = 0; b < nloc; ++b) {
      const int col = space.scalar_dof(t, b);
      if (col < 0) continue;
      out.emplace_back(row, col, local(a, b));
    }
  }
}

SparseMatrix from_triplets(int rows, int cols, const Triplets& triplets) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

namespace detail {

SparseMatrix block_diagonal2(const SparseMatrix& scalar) {
  const auto n = scalar.rows();
  Triplets triplets;
  triplets.reserve(2 * scalar.nonZeros());
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < scalar.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(scalar, k); it; ++it) {
        triplets.emplace_back(c * n + it.row(), c * n + it.col(), it.value());
      }
    }
  }
  return from_triplets(static_cast<int>(2 * n), static_cast<int>(2 * scalar.cols()), triplets);
}

SparseMatrix assemble_p1_mass_full(const StructuredTriMesh& mesh) {
  Triplets triplets;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const double area = triangle_affine_data(mesh, static_cast<int>(t)).area;
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        triplets.emplace_back(tri[a], tri[b], area * (a == b ? 2.0 : 1.0) / 12.0);
      }
    }
  }
  const int n = static_cast<int>(mesh.num_vertices());
  return from_triplets(n, n, triplets);
}

Eigen::VectorXd assemble_p1_load_full(const StructuredTriMesh& mesh, const ScalarFunction& g) {
  const QuadRule& rule = rule_for_degree(kAssemblyQuadDegree);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const int ti = static_cast<int>(t);
    const double area = triangle_affine_data(mesh, ti).area;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double gx = g(barycentric_to_cartesian(mesh, ti, rule.points[q]));
      for (int a = 0; a < 3; ++a) {
        load(mesh.triangles[t][a]) += area * rule.weights[q] * gx * rule.points[q](a);
      }
    }
  }
  return load;
}

}  // namespace detail

OperatorSet assemble_operators(const FESpace& space, int degree) {
  const auto& mesh = space.mesh();
  const QuadRule& rule = rule_for_degree(degree);
  const Tabulation tab = tabulate(space, rule);
  const int nloc = space.local_size();
  const int ns = space.num_scalar_dofs();

  Triplets mass;
  Triplets stiff;
  Triplets div;
  OperatorSet ops;
  ops.m_p = Eigen::VectorXd::Zero(space.num_pressure_dofs());

  Eigen::MatrixXd local_mass(nloc, nloc);
  Eigen::MatrixXd local_stiff(nloc, nloc);
  Eigen::MatrixXd local_div(3, 2 * nloc);
  for (std::size_t tt = 0; tt < mesh.num_triangles(); ++tt) {
    const int t = static_cast<int>(tt);
    const auto data = triangle_affine_data(mesh, t);
    local_mass.setZero();
    local_stiff.setZero();
    local_div.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = data.area * rule.weights[q];
      const Eigen::VectorXd& phi = tab.values[q];
      const Eigen::MatrixX2d grad = tab.grad_bary[q] * data.grad_lambda;
      local_mass.noalias() += w * phi * phi.transpose();
      local_stiff.noalias() += w * grad * grad.transpose();
      const Eigen::Vector3d& psi = rule.points[q];
      local_div.leftCols(nloc).noalias() += w * psi * grad.col(0).transpose();
      local_div.rightCols(nloc).noalias() += w * psi * grad.col(1).transpose();
    }
    scatter_scalar(space, t, local_mass, mass);
    scatter_scalar(space, t, local_stiff, stiff);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      ops.m_p(tri[a]) += data.area / 3.0;
      for (int c = 0; c < 2; ++c) {
        for (int b = 0; b < nloc; ++b) {
          const int col = space.scalar_dof(t, b);
          if (col < 0) continue;
          div.emplace_back(tri[a], c * ns + col, local_div(a, c * nloc + b));
        }
      }
    }
  }
  ops.M = detail::block_diagonal2(from_triplets(ns, ns, mass));
  ops.K = detail::block_diagonal2(from_triplets(ns, ns, stiff));
  ops.B = from_triplets(space.num_pressure_dofs(), 2 * ns, div);
  return ops;
}

Eigen::VectorXd pressure_gradient_functional(const OperatorSet& ops, const Eigen::VectorXd& p) {
  return -(ops.B.transpose() * p);
}

WindFunction wind_from_field(const FEField& field) {
  return [field](const Point2& x) -> Eigen::Vector2d {
    return eval_velocity(field, x, /*want_gradient=*/false).value;
  };
}

SparseMatrix assemble_convection(const FESpace& space, const WindFunction& wind, ConvectionMode mode,
                                 int degree) {
  const auto& mesh = space.mesh();
  const QuadRule& rule = rule_for_degree(degree);
  const Tabulation tab = tabulate(space, rule);
  const int nloc = space.local_size();
  const int ns = space.num_scalar_dofs();

  Triplets triplets;
  Eigen::MatrixXd local(nloc, nloc);
  for (std::size_t tt = 0; tt < mesh.num_triangles(); ++tt) {
    const int t = static_cast<int>(tt);
    const auto data = triangle_affine_data(mesh, t);
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = data.area * rule.weights[q];
      const Eigen::Vector2d wq = wind(barycentric_to_cartesian(mesh, t, rule.points[q]));
      const Eigen::MatrixX2d grad = tab.grad_bary[q] * data.grad_lambda;
      // local(i, j) = (w . grad phi_j) phi_i
      local.noalias() += w * tab.values[q] * (grad * wq).transpose();
    }
    if (mode == ConvectionMode::Skew) {
      const Eigen::MatrixXd plain = local;
      local = 0.5 * (plain - plain.transpose());
    }
    scatter_scalar(space, t, local, triplets);
  }
  return detail::block_diagonal2(from_triplets(ns, ns, triplets));
}

SparseMatrix assemble_skew_convection_jacobian(const FESpace& space, const FEField& u, int degree) {
  const auto& mesh = space.mesh();
  const QuadRule& rule = rule_for_degree(degree);
  const Tabulation tab = tabulate(space, rule);
  const int nloc = space.local_size();
  const int ns = space.num_scalar_dofs();

  Triplets triplets;
  Eigen::MatrixXd transport(nloc, nloc);
  // Local block (c, d) of the delta -> N_skew(delta) u part.
  Eigen::MatrixXd frozen[2][2];
  for (auto& row : frozen) {
    for (auto& block : row) block.resize(nloc, nloc);
  }
  for (std::size_t tt = 0; tt < mesh.num_triangles(); ++tt) {
    const int t = static_cast<int>(tt);
    const auto data = triangle_affine_data(mesh, t);
    transport.setZero();
    for (auto& row : frozen) {
      for (auto& block : row) block.setZero();
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = data.area * rule.weights[q];
      const auto uq = eval_velocity_local(u, t, rule.points[q]);
      const Eigen::VectorXd& phi = tab.values[q];
      const Eigen::MatrixX2d grad = tab.grad_bary[q] * data.grad_lambda;
      transport.noalias() += w * phi * (grad * uq.value).transpose();
      // 1/2 [ phi_j d_d u_c phi_i - phi_j d_d phi_i u_c ]
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) {
          frozen[c][d].noalias() +=
              0.5 * w * (uq.grad(c, d) * phi - uq.value(c) * grad.col(d)) * phi.transpose();
        }
      }
    }
    const Eigen::MatrixXd skew = 0.5 * (transport - transport.transpose());
    for (int a = 0; a < nloc; ++a) {
      const int row = space.scalar_dof(t, a);
      if (row < 0) continue;
      for (int b = 0; b < nloc; ++b) {
        const int col = space.scalar_dof(t, b);
        if (col < 0) continue;
        for (int c = 0; c < 2; ++c) {
          triplets.emplace_back(c * ns + row, c * ns + col, skew(a, b));
          for (int d = 0; d < 2; ++d) {
            triplets.emplace_back(c * ns + row, d * ns + col, frozen[c][d](a, b));
          }
        }
      }
    }
  }
  return from_triplets(2 * ns, 2 * ns, triplets);
}

Eigen::VectorXd assemble_load(const FESpace& space, const VectorFunction& g, int degree) {
  const auto& mesh = space.mesh();
  const QuadRule& rule = rule_for_degree(degree);
  const Tabulation tab = tabulate(space, rule);
  const int nloc = space.local_size();
  const int ns = space.num_scalar_dofs();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * ns);
  Eigen::MatrixX2d local(nloc, 2);
  for (std::size_t tt = 0; tt < mesh.num_triangles(); ++tt) {
    const int t = static_cast<int>(tt);
    const double area = triangle_affine_data(mesh, t).area;
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d gq = g(barycentric_to_cartesian(mesh, t, rule.points[q]));
      local.noalias() += area * rule.weights[q] * tab.values[q] * gq.transpose();
    }
    for (int a = 0; a < nloc; ++a) {
      const int row = space.scalar_dof(t, a);
      if (row < 0) continue;
      load(row) += local(a, 0);
      load(ns + row) += local(a, 1);
    }
  }
  return load;
}

void write_matrix_coordinates(std::ostream& os, const SparseMatrix& matrix) {
  const auto old_precision = os.precision(17);
  for (int k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace twogrid
