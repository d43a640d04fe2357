#ifndef CLOSEDLOFT_SURFACE_HPP
#define CLOSEDLOFT_SURFACE_HPP

#include "closedloft/curve.hpp"

namespace closedloft {

/// Tensor-product B-spline surface. The u direction is clamped; the v direction
/// is clamped, or cyclic with one control column per distinct control (wrapped
/// as for closed curves). net row (i * cols + j) holds P_{i,j}.
template <typename Scalar>
struct BSplineSurface {
  KnotVector<Scalar> knots_u;
  KnotVector<Scalar> knots_v;
  Index rows = 0;
  Index cols = 0;
  PointRows<Scalar> net;
  bool closed_v = false;  // periodic in v even when stored on a clamped v vector

  int degree_u() const { return knots_u.degree; }
  int degree_v() const { return knots_v.degree; }
  bool cyclic_v() const { return knots_v.style == KnotStyle::cyclic; }
  bool periodic_v() const { return closed_v || cyclic_v(); }
  auto point(Index i, Index j) const { return net.row(i * cols + j); }
  auto point(Index i, Index j) { return net.row(i * cols + j); }
};

using BSplineSurfaced = BSplineSurface<double>;

template <typename Scalar>
void validate(const BSplineSurface<Scalar>& s) {
  validate(s.knots_u);
  validate(s.knots_v);
  if (s.knots_u.style != KnotStyle::clamped) fail(ErrorKind::invalid_input, "u knot vector must be clamped");
  if (s.rows != s.knots_u.basis_count()) fail(ErrorKind::invalid_input, "control-net rows do not match u knots");
  const Index expected_cols = s.cyclic_v() ? s.knots_v.basis_count() - s.degree_v() : s.knots_v.basis_count();
  if (s.cols != expected_cols) fail(ErrorKind::invalid_input, "control-net columns do not match v knots");
  if (s.net.rows() != s.rows * s.cols) fail(ErrorKind::invalid_input, "control-net size mismatch");
}

/// Mixed partial d^{ku+kv} S / du^ku dv^kv at (u, v).
template <typename Scalar>
Point3<Scalar> eval_surface_derivative(const BSplineSurface<Scalar>& s, Scalar u, Scalar v, int ku, int kv) {
  const auto bu = basis_derivatives(s.knots_u, u, ku);
  const auto bv = basis_derivatives(s.knots_v, v, kv);
  Point3<Scalar> pt = Point3<Scalar>::Zero();
  for (Index a = 0; a < bu.ders.cols(); ++a) {
    const Index i = bu.first() + a;
    Point3<Scalar> row_sum = Point3<Scalar>::Zero();
    for (Index b = 0; b < bv.ders.cols(); ++b) {
      Index j = bv.first() + b;
      if (s.cyclic_v()) j %= s.cols;
      row_sum += bv.ders(kv, b) * s.point(i, j).transpose();
    }
    pt += bu.ders(ku, a) * row_sum;
  }
  return pt;
}

template <typename Scalar>
Point3<Scalar> eval_surface(const BSplineSurface<Scalar>& s, Scalar u, Scalar v) {
  return eval_surface_derivative(s, u, v, 0, 0);
}

/// Control row i as a curve in v.
template <typename Scalar>
BSplineCurve<Scalar> row_curve(const BSplineSurface<Scalar>& s, Index i) {
  PointRows<Scalar> ctrl(s.cols, 3);
  for (Index j = 0; j < s.cols; ++j) ctrl.row(j) = s.point(i, j);
  return {s.knots_v, std::move(ctrl), s.cyclic_v() ? CurveKind::closed : CurveKind::open};
}

}  // namespace closedloft

#endif  // CLOSEDLOFT_SURFACE_HPP
