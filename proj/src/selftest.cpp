#include "twogrid/selftest.hpp"

#include "twogrid/assembly.hpp"
#include "twogrid/exact_solutions.hpp"
#include "twogrid/experiments.hpp"
#include "twogrid/fe_basis.hpp"
#include "twogrid/galerkin.hpp"
#include "twogrid/postprocess.hpp"
#include "twogrid/quadrature.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

namespace twogrid {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

std::string format(double value) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << value;
  return os.str();
}

CheckResult check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

Barycentric random_interior_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  Barycentric b(dist(rng), dist(rng), dist(rng));
  return b / b.sum();
}

double max_abs(const SparseMatrix& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  }
  return out;
}

}  // namespace

std::vector<CheckResult> element_checks() {
  std::vector<CheckResult> out;

  double worst_moment = 0.0;
  double worst_weight_sum = 0.0;
  bool positive = true;
  for (int d = 1; d <= kMaxQuadDegree; ++d) {
    const QuadRule& rule = rule_for_degree(d);
    double sum = 0.0;
    for (double w : rule.weights) {
      sum += w;
      positive = positive && w > 0.0;
    }
    worst_weight_sum = std::max(worst_weight_sum, std::abs(sum - 1.0));
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        for (int c = 0; a + b + c <= d; ++c) {
          // Reference triangle, area 1/2.
          const double exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
          double approx = 0.0;
          for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& l = rule.points[q];
            approx += rule.weights[q] * std::pow(l(0), a) * std::pow(l(1), b) * std::pow(l(2), c);
          }
          approx *= 0.5;
          worst_moment = std::max(worst_moment, std::abs(approx - exact) / exact);
        }
      }
    }
  }
  out.push_back(check("quadrature moment exactness (deg 1..10)", worst_moment <= 1e-13,
                      "max rel err " + format(worst_moment)));
  out.push_back(check("quadrature weights positive, sum 1", positive && worst_weight_sum <= 1e-14,
                      "max |sum-1| " + format(worst_weight_sum)));

  std::mt19937_64 rng(20240601);
  double pou = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Barycentric l = random_interior_point(rng);
    pou = std::max(pou, std::abs(eval_p1<double>(l).values.sum() - 1.0));
    pou = std::max(pou, std::abs(eval_p2<double>(l).values.sum() - 1.0));
  }
  out.push_back(check("P1/P2 partition of unity", pou <= 1e-14, "max dev " + format(pou)));

  double kron = 0.0;
  const Barycentric p2_nodes[6] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                   {0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}};
  for (int n = 0; n < 6; ++n) {
    const auto v = eval_p2<double>(p2_nodes[n]).values;
    for (int k = 0; k < 6; ++k) kron = std::max(kron, std::abs(v(k) - (k == n ? 1.0 : 0.0)));
    if (n < 3) {
      const auto w = eval_p1<double>(p2_nodes[n]).values;
      for (int k = 0; k < 3; ++k) kron = std::max(kron, std::abs(w(k) - (k == n ? 1.0 : 0.0)));
    }
  }
  out.push_back(check("P1/P2 Kronecker property", kron <= 1e-15, "max dev " + format(kron)));

  double bubble_edge = 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double s = unit(rng);
    const Barycentric edges[3] = {{0, s, 1 - s}, {s, 0, 1 - s}, {s, 1 - s, 0}};
    for (const auto& l : edges) bubble_edge = std::max(bubble_edge, std::abs(eval_bubble<double>(l).values(0)));
  }
  const double bubble_center = eval_bubble<double>(Barycentric::Constant(1.0 / 3.0)).values(0);
  out.push_back(check("bubble vanishes on edges, 1 at barycenter",
                      bubble_edge <= 1e-14 && std::abs(bubble_center - 1.0) <= 1e-14,
                      "edge max " + format(bubble_edge)));

  // Finite differences in Cartesian coordinates of the reference triangle,
  // where lambda = (1 - x - y, x, y).
  double fd = 0.0;
  const double step = 1e-6;
  Eigen::Matrix<double, 3, 2> grad_lambda;
  grad_lambda << -1, -1, 1, 0, 0, 1;
  auto to_bary = [](double x, double y) { return Barycentric(1 - x - y, x, y); };
  for (int k = 0; k < 10; ++k) {
    const Barycentric l = random_interior_point(rng);
    const double x = l(1), y = l(2);
    auto compare = [&](const Eigen::MatrixXd& analytic, auto eval) {
      const Eigen::VectorXd dx = (eval(to_bary(x + step, y)) - eval(to_bary(x - step, y))) / (2 * step);
      const Eigen::VectorXd dy = (eval(to_bary(x, y + step)) - eval(to_bary(x, y - step))) / (2 * step);
      for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
        const Eigen::Vector2d num(dx(i), dy(i));
        const Eigen::Vector2d ana = analytic.row(i).transpose();
        fd = std::max(fd, (num - ana).norm() / std::max(1.0, ana.norm()));
      }
    };
    compare(eval_p1<double>(l).grad_bary * grad_lambda,
            [](const Barycentric& b) -> Eigen::VectorXd { return eval_p1<double>(b).values; });
    compare(eval_p2<double>(l).grad_bary * grad_lambda,
            [](const Barycentric& b) -> Eigen::VectorXd { return eval_p2<double>(b).values; });
    compare(eval_bubble<double>(l).grad_bary * grad_lambda,
            [](const Barycentric& b) -> Eigen::VectorXd { return eval_bubble<double>(b).values; });
  }
  out.push_back(check("shape gradients vs finite differences", fd <= 1e-6, "max rel err " + format(fd)));
  return out;
}

std::vector<CheckResult> structure_checks() {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;

  {
    const SpacePtr space = build_space(4, Family::Mini);
    FEField wind = FEField::zero_velocity(space);
    for (Eigen::Index k = 0; k < wind.coeffs.size(); ++k) wind.coeffs(k) = normal(rng);
    const SparseMatrix N = assemble_convection(*space, wind_from_field(wind), ConvectionMode::Skew);
    const double scale = max_abs(N);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd v(N.rows());
      for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = normal(rng);
      worst = std::max(worst, std::abs(v.dot(N * v)) / (v.squaredNorm() * scale));
    }
    out.push_back(check("skew convection annihilation (100 random v)", worst <= 1e-12,
                        "max |v^T N v|/(|v|^2 |N|max) " + format(worst)));
  }

  double bt_const = 0.0;
  double asym = 0.0;
  for (Family family : {Family::Mini, Family::TaylorHood}) {
    const SpacePtr space = build_space(8, family);
    const OperatorSet ops = assemble_operators(*space);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(space->num_pressure_dofs());
    bt_const = std::max(bt_const, (ops.B.transpose() * ones).cwiseAbs().maxCoeff());
    asym = std::max(asym, max_abs(SparseMatrix(ops.K - SparseMatrix(ops.K.transpose()))) / max_abs(ops.K));
    asym = std::max(asym, max_abs(SparseMatrix(ops.M - SparseMatrix(ops.M.transpose()))) / max_abs(ops.M));
  }
  out.push_back(check("B^T (constant pressure) = 0", bt_const <= 1e-12, "max " + format(bt_const)));
  out.push_back(check("mass and stiffness symmetric", asym <= 1e-12, "rel asym " + format(asym)));

  {
    EvolutionConfig evo;
    evo.nu = manufactured::kNu;
    evo.dt = 0.01;
    evo.t_final = 0.1;
    evo.forcing = manufactured::forcing_function();
    std::vector<StepRecord> history;
    const GalerkinState coarse =
        evolve([](const Point2& x) { return manufactured::velocity(x, 0.0); }, evo,
               build_space(6, Family::Mini), &history);
    double worst = 0.0;
    for (const auto& r : history) worst = std::max(worst, r.div_residual);
    out.push_back(check("divergence after every evolution step", worst <= 1e-9,
                        "max |Bu|inf " + format(worst)));

    PostprocessRequest request;
    request.coarse = &coarse;
    request.fine = build_space(12, Family::Mini);
    request.nu = evo.nu;
    request.forcing = evo.forcing;
    const OperatorSet fine_ops = assemble_operators(*request.fine);
    double post = 0.0;
    for (PostprocessMethod m : {PostprocessMethod::OseenNew, PostprocessMethod::StokesStandard}) {
      request.method = m;
      const PostprocessResult r = postprocess(request);
      post = std::max(post, (fine_ops.B * r.u.coeffs).cwiseAbs().maxCoeff());
    }
    out.push_back(check("divergence of postprocess outputs", post <= 1e-10, "max |Bu|inf " + format(post)));
  }
  return out;
}

bool run_selftest(std::ostream& os) {
  bool ok = true;
  auto report = [&](const CheckResult& c) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.detail << ")\n";
    ok = ok && c.passed;
  };
  for (const auto& c : element_checks()) report(c);
  for (const auto& c : structure_checks()) report(c);

  StokesMmsConfig mms;
  mms.levels = {4, 8, 16};
  const StokesMmsResult r = run_stokes_mms(mms);
  const double l2 = r.slopes.at("stokes_mini", "u_L2");
  const double h1 = r.slopes.at("stokes_mini", "u_H1");
  const double p = r.slopes.at("stokes_mini", "p_L2");
  // Coarse levels: looser bands than the full study.
  report(check("Mini Stokes MMS slopes (N=4,8,16)",
               std::abs(l2 - 2.0) <= 0.4 && std::abs(h1 - 1.0) <= 0.4 && p >= 0.6,
               "L2 " + format(l2) + ", H1 " + format(h1) + ", p " + format(p)));
  return ok;
}

}  // namespace twogrid
