#include "twogrid/fe_space.hpp"

#include "twogrid/exceptions.hpp"
#include "twogrid/fe_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twogrid {

std::string_view family_name(Family family) {
  return family == Family::Mini ? "mini" : "taylor-hood";
}

FESpace::FESpace(std::shared_ptr<const StructuredTriMesh> mesh, Family family)
    : mesh_(std::move(mesh)), family_(family) {
  if (!mesh_) throw std::invalid_argument("FESpace: null mesh");
  const auto& m = *mesh_;
  int next = 0;
  vertex_dof_.assign(m.num_vertices(), -1);
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    if (!m.boundary_vertex[v]) vertex_dof_[v] = next++;
  }
  first_bubble_ = next;
  if (family_ == Family::Mini) {
    bubble_dof_.resize(m.num_triangles());
    for (std::size_t t = 0; t < m.num_triangles(); ++t) bubble_dof_[t] = next++;
  } else {
    first_bubble_ = -1;
    edge_dof_.assign(m.num_edges(), -1);
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      if (!m.boundary_edge[e]) edge_dof_[e] = next++;
    }
  }
  num_scalar_ = next;

  const int nloc = local_size();
  local_dofs_.resize(m.num_triangles() * nloc);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    int* dofs = &local_dofs_[t * nloc];
    for (int k = 0; k < 3; ++k) dofs[k] = vertex_dof_[m.triangles[t][k]];
    if (family_ == Family::Mini) {
      dofs[3] = bubble_dof_[t];
    } else {
      for (int k = 0; k < 3; ++k) dofs[3 + k] = edge_dof_[m.triangle_edges[t][k]];
    }
  }
}

bool FESpace::is_bubble_dof(int scalar_dof) const {
  return family_ == Family::Mini && scalar_dof >= first_bubble_;
}

void FESpace::eval_local_shapes(const Barycentric& lambda, Eigen::VectorXd& values,
                                Eigen::MatrixX3d& grad_bary) const {
  const int nloc = local_size();
  values.resize(nloc);
  grad_bary.resize(nloc, 3);
  if (family_ == Family::Mini) {
    const auto p1 = eval_p1<double>(lambda);
    const auto b = eval_bubble<double>(lambda);
    values.head<3>() = p1.values;
    values(3) = b.values(0);
    grad_bary.topRows<3>() = p1.grad_bary;
    grad_bary.row(3) = b.grad_bary.row(0);
  } else {
    const auto p2 = eval_p2<double>(lambda);
    values = p2.values;
    grad_bary = p2.grad_bary;
  }
}

SpacePtr build_space(std::shared_ptr<const StructuredTriMesh> mesh, Family family) {
  return std::make_shared<const FESpace>(std::move(mesh), family);
}

SpacePtr build_space(int n_subdiv, Family family) {
  return build_space(std::make_shared<const StructuredTriMesh>(build_unit_square_mesh(n_subdiv)),
                     family);
}

FEField FEField::zero_velocity(SpacePtr space) {
  const int n = space->num_velocity_dofs();
  return FEField{std::move(space), FieldRole::Velocity, Eigen::VectorXd::Zero(n)};
}

FEField FEField::zero_pressure(SpacePtr space) {
  const int n = space->num_pressure_dofs();
  return FEField{std::move(space), FieldRole::Pressure, Eigen::VectorXd::Zero(n)};
}

namespace {

void check_finite(double value, const Point2& x) {
  if (!std::isfinite(value)) {
    throw NumericalError("interpolate: non-finite value at (" + std::to_string(x(0)) + ", " +
                         std::to_string(x(1)) + ")");
  }
}

}  // namespace

FEField interpolate_velocity(SpacePtr space, const VectorFunction& u) {
  FEField field = FEField::zero_velocity(space);
  const auto& mesh = space->mesh();
  const int ns = space->num_scalar_dofs();
  auto set = [&](int dof, const Point2& x) {
    if (dof < 0) return;
    const Eigen::Vector2d value = u(x);
    check_finite(value(0), x);
    check_finite(value(1), x);
    field.coeffs(dof) = value(0);
    field.coeffs(ns + dof) = value(1);
  };
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    set(space->vertex_dof(static_cast<int>(v)), mesh.vertices[v]);
  }
  if (space->family() == Family::TaylorHood) {
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      set(space->edge_dof(static_cast<int>(e)), mesh.edge_midpoints[e]);
    }
  }
  return field;
}

FEField interpolate_pressure(SpacePtr space, const ScalarFunction& p) {
  FEField field = FEField::zero_pressure(space);
  const auto& mesh = space->mesh();
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const double value = p(mesh.vertices[v]);
    check_finite(value, mesh.vertices[v]);
    field.coeffs(static_cast<Eigen::Index>(v)) = value;
  }
  return field;
}

VelocitySample eval_velocity_local(const FEField& field, int triangle, const Barycentric& lambda,
                                   bool want_gradient) {
  const FESpace& space = *field.space;
  const int ns = space.num_scalar_dofs();
  Eigen::VectorXd values;
  Eigen::MatrixX3d grad_bary;
  space.eval_local_shapes(lambda, values, grad_bary);
  VelocitySample s;
  Eigen::Matrix<double, 3, 2> grad_lambda;
  if (want_gradient) grad_lambda = triangle_affine_data(space.mesh(), triangle).grad_lambda;
  for (int k = 0; k < space.local_size(); ++k) {
    const int dof = space.scalar_dof(triangle, k);
    if (dof < 0) continue;
    const Eigen::Vector2d c(field.coeffs(dof), field.coeffs(ns + dof));
    s.value += values(k) * c;
    if (want_gradient) {
      const Eigen::RowVector2d g = grad_bary.row(k) * grad_lambda;
      s.grad += c * g;
    }
  }
  return s;
}

PressureSample eval_pressure_local(const FEField& field, int triangle, const Barycentric& lambda,
                                   bool want_gradient) {
  const auto& mesh = field.space->mesh();
  const auto& tri = mesh.triangles[triangle];
  PressureSample s;
  for (int k = 0; k < 3; ++k) s.value += lambda(k) * field.coeffs(tri[k]);
  if (want_gradient) {
    const auto data = triangle_affine_data(mesh, triangle);
    for (int k = 0; k < 3; ++k) s.grad += field.coeffs(tri[k]) * data.grad_lambda.row(k).transpose();
  }
  return s;
}

VelocitySample eval_velocity(const FEField& field, const Point2& x, bool want_gradient) {
  if (field.role != FieldRole::Velocity) {
    throw std::invalid_argument("eval_velocity: field is not a velocity field");
  }
  const auto loc = locate_point(field.space->mesh(), x);
  return eval_velocity_local(field, loc.triangle, loc.lambda, want_gradient);
}

PressureSample eval_pressure(const FEField& field, const Point2& x, bool want_gradient) {
  if (field.role != FieldRole::Pressure) {
    throw std::invalid_argument("eval_pressure: field is not a pressure field");
  }
  const auto loc = locate_point(field.space->mesh(), x);
  return eval_pressure_local(field, loc.triangle, loc.lambda, want_gradient);
}

FEField linear_part(const FEField& field) {
  if (field.role != FieldRole::Velocity || field.space->family() != Family::Mini) {
    throw std::invalid_argument("linear_part: requires a Mini velocity field");
  }
  FEField out = field;
  const int ns = field.space->num_scalar_dofs();
  const auto& mesh = field.space->mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const int b = field.space->bubble_dof(static_cast<int>(t));
    out.coeffs(b) = 0.0;
    out.coeffs(ns + b) = 0.0;
  }
  return out;
}

double pressure_mean(const FEField& field) {
  if (field.role != FieldRole::Pressure) {
    throw std::invalid_argument("pressure_mean: field is not a pressure field");
  }
  const auto& mesh = field.space->mesh();
  double integral = 0.0;
  double area = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto data = triangle_affine_data(mesh, static_cast<int>(t));
    const auto& tri = mesh.triangles[t];
    integral += data.area * (field.coeffs(tri[0]) + field.coeffs(tri[1]) + field.coeffs(tri[2])) / 3.0;
    area += data.area;
  }
  return integral / area;
}

FEField normalize_pressure(const FEField& field) {
  FEField out = field;
  out.coeffs.array() -= pressure_mean(field);
  return out;
}

}  // namespace twogrid
