#pragma once

#include <Eigen/Core>

namespace twogrid {

enum class ShapeKind { P1, P2, Bubble };

/// Shape function values and their derivatives with respect to the three
/// barycentric coordinates (row i, column k = d phi_i / d lambda_k). The
/// physical gradient is grad_bary * grad_lambda for an affine triangle.
template <typename Scalar, int Count>
struct ShapeValues {
  Eigen::Matrix<Scalar, Count, 1> values;
  Eigen::Matrix<Scalar, Count, 3> grad_bary;
};

template <typename Scalar>
using Bary = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
ShapeValues<Scalar, 3> eval_p1(const Bary<Scalar>& lambda) {
  ShapeValues<Scalar, 3> s;
  s.values = lambda;
  s.grad_bary.setIdentity();
  return s;
}

/// Vertex functions lambda_i (2 lambda_i - 1) first, then edge functions
/// 4 lambda_j lambda_k for the edges opposite vertex 0, 1, 2.
template <typename Scalar>
ShapeValues<Scalar, 6> eval_p2(const Bary<Scalar>& lambda) {
  ShapeValues<Scalar, 6> s;
  s.grad_bary.setZero();
  for (int i = 0; i < 3; ++i) {
    s.values(i) = lambda(i) * (Scalar(2) * lambda(i) - Scalar(1));
    s.grad_bary(i, i) = Scalar(4) * lambda(i) - Scalar(1);
  }
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3;
    const int b = (k + 2) % 3;
    s.values(3 + k) = Scalar(4) * lambda(a) * lambda(b);
    s.grad_bary(3 + k, a) = Scalar(4) * lambda(b);
    s.grad_bary(3 + k, b) = Scalar(4) * lambda(a);
  }
  return s;
}

/// Cubic bubble 27 lambda_0 lambda_1 lambda_2.
template <typename Scalar>
ShapeValues<Scalar, 1> eval_bubble(const Bary<Scalar>& lambda) {
  ShapeValues<Scalar, 1> s;
  s.values(0) = Scalar(27) * lambda(0) * lambda(1) * lambda(2);
  s.grad_bary(0, 0) = Scalar(27) * lambda(1) * lambda(2);
  s.grad_bary(0, 1) = Scalar(27) * lambda(0) * lambda(2);
  s.grad_bary(0, 2) = Scalar(27) * lambda(0) * lambda(1);
  return s;
}

}  // namespace twogrid
