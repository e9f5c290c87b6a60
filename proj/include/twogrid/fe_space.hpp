#pragma once

#include "twogrid/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

namespace twogrid {

enum class Family { Mini, TaylorHood };

std::string_view family_name(Family family);

/// Velocity-pressure pair on a StructuredTriMesh with homogeneous Dirichlet
/// velocity. Each velocity component uses the same scalar space; velocity
/// coefficient vectors are laid out [component 0 | component 1], each block
/// of length num_scalar_dofs(). Boundary DOFs are not stored. Pressure is P1
/// on every vertex (no DOF removed).
class FESpace {
 public:
  FESpace(std::shared_ptr<const StructuredTriMesh> mesh, Family family);

  Family family() const { return family_; }
  const StructuredTriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const StructuredTriMesh>& mesh_ptr() const { return mesh_; }
  double mesh_size() const { return mesh_->mesh_size(); }

  /// Local scalar basis size: 4 (P1 + bubble) or 6 (P2).
  int local_size() const { return family_ == Family::Mini ? 4 : 6; }
  int num_scalar_dofs() const { return num_scalar_; }
  int num_velocity_dofs() const { return 2 * num_scalar_; }
  int num_pressure_dofs() const { return static_cast<int>(mesh_->num_vertices()); }

  /// Global scalar index of local function k on triangle t, or -1 if the DOF
  /// sits on the boundary. Local order: vertices, then edges opposite
  /// vertex 0..2 (TaylorHood) or the bubble (Mini).
  int scalar_dof(int triangle, int local) const { return local_dofs_[triangle * local_size() + local]; }
  /// Global scalar index of vertex v, or -1 for boundary vertices.
  int vertex_dof(int vertex) const { return vertex_dof_[vertex]; }
  /// Global scalar index of the bubble on triangle t (Mini only).
  int bubble_dof(int triangle) const { return bubble_dof_[triangle]; }
  /// Global scalar index of edge e (TaylorHood only), or -1 on the boundary.
  int edge_dof(int edge) const { return edge_dof_[edge]; }

  /// Scalar DOFs whose basis is continuous piecewise-linear (vertex DOFs),
  /// i.e. everything except bubbles.
  bool is_bubble_dof(int scalar_dof) const;

  /// Shape functions at a barycentric point: values and barycentric
  /// derivatives, local_size() rows.
  void eval_local_shapes(const Barycentric& lambda, Eigen::VectorXd& values,
                         Eigen::MatrixX3d& grad_bary) const;

 private:
  std::shared_ptr<const StructuredTriMesh> mesh_;
  Family family_;
  int num_scalar_ = 0;
  int first_bubble_ = 0;
  std::vector<int> vertex_dof_;
  std::vector<int> edge_dof_;
  std::vector<int> bubble_dof_;
  std::vector<int> local_dofs_;
};

using SpacePtr = std::shared_ptr<const FESpace>;

SpacePtr build_space(std::shared_ptr<const StructuredTriMesh> mesh, Family family);
SpacePtr build_space(int n_subdiv, Family family);

enum class FieldRole { Velocity, Pressure };

/// A discrete function: coefficients with respect to a space's velocity or
/// pressure basis. Velocity fields vanish on the boundary implicitly.
struct FEField {
  SpacePtr space;
  FieldRole role = FieldRole::Velocity;
  Eigen::VectorXd coeffs;

  static FEField zero_velocity(SpacePtr space);
  static FEField zero_pressure(SpacePtr space);
};

using VectorFunction = std::function<Eigen::Vector2d(const Point2&)>;
using ScalarFunction = std::function<double(const Point2&)>;

/// Nodal interpolation at interior vertices (and interior edge midpoints for
/// TaylorHood). Bubble coefficients are zero; boundary values are dropped.
FEField interpolate_velocity(SpacePtr space, const VectorFunction& u);
FEField interpolate_pressure(SpacePtr space, const ScalarFunction& p);

struct VelocitySample {
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
  /// Row c is the gradient of component c.
  Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
};

struct PressureSample {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
};

VelocitySample eval_velocity(const FEField& field, const Point2& x, bool want_gradient = true);
PressureSample eval_pressure(const FEField& field, const Point2& x, bool want_gradient = true);

/// Same as above when the containing triangle and barycentric coordinates
/// are already known.
VelocitySample eval_velocity_local(const FEField& field, int triangle, const Barycentric& lambda,
                                   bool want_gradient = true);
PressureSample eval_pressure_local(const FEField& field, int triangle, const Barycentric& lambda,
                                   bool want_gradient = true);

/// Mini velocity with every bubble coefficient zeroed.
FEField linear_part(const FEField& field);

/// Mean of a P1 pressure field, computed exactly.
double pressure_mean(const FEField& field);

/// Returns p - mean(p).
FEField normalize_pressure(const FEField& field);

}  // namespace twogrid
