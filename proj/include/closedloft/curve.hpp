#ifndef CLOSEDLOFT_CURVE_HPP
#define CLOSEDLOFT_CURVE_HPP

#include <sstream>

#include "closedloft/basis.hpp"

namespace closedloft {

enum class CurveKind { open, closed };

/// Polynomial B-spline curve in 3D.
///
/// Open curves hold one control point per basis function. Closed curves are
/// defined over a cyclic knot vector and hold only the n̂+1 distinct control
/// points; basis function j uses control (j mod (n̂+1)).
template <typename Scalar>
struct BSplineCurve {
  KnotVector<Scalar> knots;
  PointRows<Scalar> controls;
  CurveKind kind = CurveKind::open;

  int degree() const { return knots.degree; }
  bool closed() const { return kind == CurveKind::closed; }
};

using BSplineCurved = BSplineCurve<double>;

template <typename Scalar>
void validate(const BSplineCurve<Scalar>& c) {
  validate(c.knots);
  if (c.closed()) {
    if (c.knots.style != KnotStyle::cyclic) fail(ErrorKind::invalid_input, "closed curve needs a cyclic knot vector");
    if (c.controls.rows() != c.knots.basis_count() - c.degree())
      fail(ErrorKind::invalid_input, "closed curve control count must equal basis count minus degree");
  } else if (c.controls.rows() != c.knots.basis_count()) {
    fail(ErrorKind::invalid_input, "open curve control count must equal basis count");
  }
  if (!c.controls.allFinite()) fail(ErrorKind::invalid_input, "control points must be finite");
}

/// n̂+p+1 controls of a closed curve with the last p repeating the first p.
template <typename Scalar>
PointRows<Scalar> expanded_controls(const BSplineCurve<Scalar>& c) {
  if (!c.closed()) return c.controls;
  const Index distinct = c.controls.rows();
  PointRows<Scalar> out(c.knots.basis_count(), 3);
  for (Index j = 0; j < out.rows(); ++j) out.row(j) = c.controls.row(j % distinct);
  return out;
}

/// Closed curve from expanded storage; the wrapped copies are dropped.
template <typename Scalar>
BSplineCurve<Scalar> closed_from_expanded(KnotVector<Scalar> kv, const PointRows<Scalar>& expanded) {
  const Index distinct = kv.basis_count() - kv.degree;
  if (expanded.rows() != kv.basis_count()) fail(ErrorKind::invalid_input, "expanded control count mismatch");
  return {std::move(kv), expanded.topRows(distinct), CurveKind::closed};
}

template <typename Scalar>
Point3<Scalar> eval_curve(const BSplineCurve<Scalar>& c, Scalar u) {
  const auto b = basis_functions(c.knots, u);
  const Index distinct = c.controls.rows();
  Point3<Scalar> pt = Point3<Scalar>::Zero();
  for (Index r = 0; r < b.values.size(); ++r) {
    const Index j = b.first() + r;
    pt += b.values(r) * c.controls.row(c.closed() ? j % distinct : j).transpose();
  }
  return pt;
}

/// Rows 0..order hold C(u), C'(u), ..., C^(order)(u).
template <typename Scalar>
PointRows<Scalar> eval_curve_derivatives(const BSplineCurve<Scalar>& c, Scalar u, int order) {
  const auto d = basis_derivatives(c.knots, u, order);
  const Index distinct = c.controls.rows();
  PointRows<Scalar> out = PointRows<Scalar>::Zero(order + 1, 3);
  for (Index r = 0; r < d.ders.cols(); ++r) {
    const Index j = d.first() + r;
    const auto ctrl = c.controls.row(c.closed() ? j % distinct : j);
    for (int k = 0; k <= order; ++k) out.row(k) += d.ders(k, r) * ctrl;
  }
  return out;
}

/// Rewrites a closed curve on its cyclic knot vector as the identical open
/// curve on a clamped knot vector by removing the knots outside the domain
/// through repeated insertion at the domain ends.
template <typename Scalar>
BSplineCurve<Scalar> clamp_closed_curve(const BSplineCurve<Scalar>& c) {
  if (!c.closed() || c.knots.style != KnotStyle::cyclic)
    fail(ErrorKind::invalid_input, "clamping expects a closed curve on a cyclic knot vector");
  validate(c);
  const int p = c.degree();
  PointRows<Scalar> P = expanded_controls(c);
  std::vector<Scalar> u = c.knots.knots;
  const Index n = P.rows() - 1;
  auto U = [&](Index k) -> Scalar& { return u[static_cast<std::size_t>(k)]; };

  // left end
  for (Index i = p - 2; i >= 0; --i) {
    for (Index j = 0; j <= i; ++j) {
      const Scalar alpha = (U(p) - U(p - 1 - i + j)) / (U(p + j + 1) - U(p - 1 - i + j));
      P.row(j) = (Scalar(1) - alpha) * P.row(j) + alpha * P.row(j + 1);
    }
    U(p - i - 1) = U(p);
  }
  // right end
  for (Index i = p - 2; i >= 0; --i) {
    for (Index j = 0; j <= i; ++j) {
      const Scalar alpha = (U(n + 1) - U(n - j)) / (U(n - j + i + 2) - U(n - j));
      // Weights as in Boehm insertion; the mirrored form only agrees on uniform knots.
      P.row(n - j) = alpha * P.row(n - j) + (Scalar(1) - alpha) * P.row(n - j - 1);
    }
    U(n + i + 2) = U(n + 1);
  }
  // The two outermost knots never influence the domain.
  U(0) = U(p);
  U(n + p + 1) = U(n + 1);
  return {{std::move(u), p, KnotStyle::clamped}, std::move(P), CurveKind::open};
}

/// Inserts `new_knots` (sorted, inside the domain) into an open clamped curve
/// without changing its shape.
template <typename Scalar>
BSplineCurve<Scalar> refine_knots(const BSplineCurve<Scalar>& c, std::vector<Scalar> new_knots) {
  if (c.closed() || c.knots.style != KnotStyle::clamped)
    fail(ErrorKind::invalid_input, "knot refinement expects an open curve on a clamped knot vector");
  if (new_knots.empty()) return c;
  std::sort(new_knots.begin(), new_knots.end());
  const Scalar lo = c.knots.domain_begin();
  const Scalar hi = c.knots.domain_end();
  for (Scalar x : new_knots) {
    if (!(x > lo && x < hi)) {
      std::ostringstream msg;
      msg << "knot " << x << " is not inside the curve domain (" << lo << ", " << hi << ")";
      fail(ErrorKind::invalid_input, msg.str());
    }
  }

  const int p = c.degree();
  const auto& U = c.knots;
  const auto& P = c.controls;
  const Index n = P.rows() - 1;
  const Index m = n + p + 1;
  const Index r = static_cast<Index>(new_knots.size()) - 1;
  auto X = [&](Index j) { return new_knots[static_cast<std::size_t>(j)]; };

  const Index a = find_span(U, X(0));
  const Index b = find_span(U, X(r)) + 1;
  PointRows<Scalar> Q(n + r + 2, 3);
  std::vector<Scalar> Ubar(static_cast<std::size_t>(m + r + 2));
  auto Ub = [&](Index k) -> Scalar& { return Ubar[static_cast<std::size_t>(k)]; };

  for (Index j = 0; j <= a - p; ++j) Q.row(j) = P.row(j);
  for (Index j = b - 1; j <= n; ++j) Q.row(j + r + 1) = P.row(j);
  for (Index j = 0; j <= a; ++j) Ub(j) = U[j];
  for (Index j = b + p; j <= m; ++j) Ub(j + r + 1) = U[j];

  Index i = b + p - 1;
  Index k = b + p + r;
  for (Index j = r; j >= 0; --j) {
    while (X(j) <= U[i] && i > a) {
      Q.row(k - p - 1) = P.row(i - p - 1);
      Ub(k) = U[i];
      --k;
      --i;
    }
    Q.row(k - p - 1) = Q.row(k - p);
    for (Index l = 1; l <= p; ++l) {
      const Index ind = k - p + l;
      Scalar alpha = Ub(k + l) - X(j);
      if (alpha == Scalar(0)) {
        Q.row(ind - 1) = Q.row(ind);
      } else {
        alpha /= Ub(k + l) - U[i - p + l];
        Q.row(ind - 1) = alpha * Q.row(ind - 1) + (Scalar(1) - alpha) * Q.row(ind);
      }
    }
    Ub(k) = X(j);
    --k;
  }

  KnotVector<Scalar> kv{std::move(Ubar), p, KnotStyle::clamped};
  for (const auto& g : knot_groups(kv.knots)) {
    if (g.first > lo && g.first < hi && g.second > p)
      fail(ErrorKind::invalid_input, "knot refinement would exceed multiplicity p");
  }
  return {std::move(kv), std::move(Q), CurveKind::open};
}

/// Refines an open clamped curve onto `target`, which must contain the
/// curve's knots; the result carries `target` verbatim.
template <typename Scalar>
BSplineCurve<Scalar> refine_to(const BSplineCurve<Scalar>& c, const KnotVector<Scalar>& target) {
  auto refined = refine_knots(c, knots_to_insert(c.knots, target));
  if (refined.knots.size() != target.size())
    fail(ErrorKind::invalid_input, "refined knot count does not match the target knot vector");
  refined.knots = target;
  return refined;
}

}  // namespace closedloft

#endif  // CLOSEDLOFT_CURVE_HPP
