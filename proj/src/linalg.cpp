#include "closedloft/linalg.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "closedloft/basis.hpp"

namespace closedloft {

namespace {

constexpr double pivot_threshold = 1e-14;

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
void gauss_legendre(int count, VectorXd& nodes, VectorXd& weights) {
  nodes.resize(count);
  weights.resize(count);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= count; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = count * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes(i) = -x;
    nodes(count - 1 - i) = x;
    weights(i) = weights(count - 1 - i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

MatrixXd assemble_open_collocation(const ParameterValues& t, const KnotVectord& kv) {
  MatrixXd n = MatrixXd::Zero(t.size(), kv.basis_count());
  for (Index i = 0; i < t.size(); ++i) {
    const auto b = basis_functions(kv, t[i]);
    n.row(i).segment(b.first(), b.values.size()) = b.values.transpose();
  }
  return n;
}

ClosedSystem assemble_closed_system(const ParameterValues& t, const KnotVectord& kv, Index nhat) {
  if (kv.style != KnotStyle::cyclic) fail(ErrorKind::invalid_input, "closed system needs a cyclic knot vector");
  const int p = kv.degree;
  const Index cols = nhat + p + 1;
  if (kv.basis_count() != cols) {
    std::ostringstream msg;
    msg << "cyclic knot vector has " << kv.basis_count() << " basis functions, expected " << cols;
    fail(ErrorKind::invalid_input, msg.str());
  }
  ClosedSystem sys{MatrixXd::Zero(t.size() + p, cols), t.size(), p};
  for (Index i = 0; i < t.size(); ++i) {
    const auto b = basis_functions(kv, t[i]);
    sys.matrix.row(i).segment(b.first(), b.values.size()) = b.values.transpose();
  }
  for (Index r = 0; r < p; ++r) {
    sys.matrix(t.size() + r, r) = 1.0;
    sys.matrix(t.size() + r, nhat + 1 + r) = -1.0;
  }
  return sys;
}

MatrixXd closed_rhs(const Points& points, int degree) {
  MatrixXd q = MatrixXd::Zero(points.rows() + degree, 3);
  q.topRows(points.rows()) = points;
  return q;
}

MatrixXd solve_dense(const MatrixXd& m, const MatrixXd& rhs) {
  if (m.rows() != m.cols()) fail(ErrorKind::invalid_input, "solve_dense needs a square matrix");
  if (rhs.rows() != m.rows()) fail(ErrorKind::invalid_input, "right-hand side row count mismatch");
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) fail(ErrorKind::singular, "matrix is zero");
  Eigen::PartialPivLU<MatrixXd> lu(m);
  const VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  Index where = 0;
  if (!(pivots.minCoeff(&where) >= pivot_threshold * scale)) {
    std::ostringstream msg;
    msg << "numerically singular matrix (pivot " << where << " = " << pivots(where) << ")";
    fail(ErrorKind::singular, msg.str());
  }
  return lu.solve(rhs);
}

std::optional<MatrixXd> solve_banded_no_pivot(const MatrixXd& m, Index half_bandwidth, const MatrixXd& rhs) {
  if (m.rows() != m.cols()) fail(ErrorKind::invalid_input, "banded solve needs a square matrix");
  if (rhs.rows() != m.rows()) fail(ErrorKind::invalid_input, "right-hand side row count mismatch");
  const Index n = m.rows();
  const Index w = half_bandwidth;
  MatrixXd a = m;
  MatrixXd x = rhs;
  const double scale = m.cwiseAbs().maxCoeff();
  for (Index k = 0; k < n; ++k) {
    const double pivot = a(k, k);
    if (!(std::abs(pivot) > pivot_threshold * scale)) return std::nullopt;
    const Index last = std::min(n - 1, k + w);
    for (Index i = k + 1; i <= last; ++i) {
      const double f = a(i, k) / pivot;
      if (f == 0.0) continue;
      a.row(i).segment(k, last - k + 1) -= f * a.row(k).segment(k, last - k + 1);
      x.row(i) -= f * x.row(k);
    }
  }
  for (Index k = n - 1; k >= 0; --k) {
    const Index last = std::min(n - 1, k + w);
    for (Index j = k + 1; j <= last; ++j) x.row(k) -= a(k, j) * x.row(j);
    x.row(k) /= a(k, k);
  }
  return x;
}

MatrixXd stiffness_matrix(const KnotVectord& kv, double alpha, double beta) {
  const int p = kv.degree;
  if (alpha < 0.0 || beta < 0.0) fail(ErrorKind::invalid_input, "energy weights must be non-negative");
  if (beta > 0.0 && p < 2) fail(ErrorKind::invalid_input, "bending energy needs degree >= 2");
  const Index nb = kv.basis_count();
  MatrixXd k = MatrixXd::Zero(nb, nb);
  if (alpha == 0.0 && beta == 0.0) return k;
  const int order = beta > 0.0 ? 2 : 1;

  VectorXd nodes, weights;
  gauss_legendre(p + 1, nodes, weights);
  for (Index s = p; s < nb; ++s) {
    const double a = kv[s], b = kv[s + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a);
    for (Index g = 0; g < nodes.size(); ++g) {
      const double u = a + half * (nodes(g) + 1.0);
      const auto d = basis_derivatives(kv, u, order);
      const double w = half * weights(g);
      const Index first = d.first();
      for (Index r = 0; r <= p; ++r) {
        for (Index c = r; c <= p; ++c) {
          double v = alpha * d.ders(1, r) * d.ders(1, c);
          if (order == 2) v += beta * d.ders(2, r) * d.ders(2, c);
          k(first + r, first + c) += w * v;
        }
      }
    }
  }
  // Upper triangle holds the sums; mirror it so symmetry is exact.
  k.triangularView<Eigen::StrictlyLower>() = k.transpose();
  return k;
}

KktSolution solve_kkt(const MatrixXd& k, const MatrixXd& c, const MatrixXd& rhs) {
  const Index nx = k.rows();
  const Index nc = c.rows();
  if (k.cols() != nx || c.cols() != nx || rhs.rows() != nc)
    fail(ErrorKind::invalid_input, "KKT block dimensions mismatch");
  // Null-space form. Pivoting the saddle matrix directly mixes the O(1)
  // constraint rows with stiffness entries that grow like 1/h^3 on short
  // spans, so its pivots say little about solvability.
  Eigen::ColPivHouseholderQR<MatrixXd> qr(c.transpose());
  qr.setThreshold(default_rank_tolerance);
  if (qr.rank() < nc) {
    std::ostringstream msg;
    msg << "KKT system singular: constraint block has rank " << qr.rank() << " < " << nc << " rows";
    fail(ErrorKind::singular, msg.str());
  }
  // C^T P = Q R, so C = P R^T Q1^T
  const MatrixXd q = qr.householderQ();
  const MatrixXd q1 = q.leftCols(nc), z = q.rightCols(nx - nc);
  const auto r = qr.matrixR().topLeftCorner(nc, nc).triangularView<Eigen::Upper>();
  const MatrixXd y = r.transpose().solve(qr.colsPermutation().transpose() * rhs);
  MatrixXd x = q1 * y;
  if (nx > nc) {
    const MatrixXd h = z.transpose() * k * z;
    Eigen::LDLT<MatrixXd> ldlt(h);
    const VectorXd d = ldlt.vectorD();
    const double scale = d.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(scale > 0.0) || !(d.minCoeff() > pivot_threshold * scale))
      fail(ErrorKind::singular, "KKT system singular: stiffness block is singular on the constraint null space");
    x -= z * ldlt.solve(z.transpose() * k * x);
  }
  // K x + C^T lambda = 0
  const MatrixXd lambda = qr.colsPermutation() * r.solve(-(q1.transpose() * (k * x)));
  return {x, lambda};
}

RankReport rank_report(const MatrixXd& m, double rel_tol) {
  RankReport rep;
  rep.tolerance = rel_tol;
  if (m.size() == 0) return rep;
  Eigen::BDCSVD<MatrixXd> svd(m);
  rep.singular_values = svd.singularValues();
  const double smax = rep.singular_values(0);
  const double smin = rep.singular_values(rep.singular_values.size() - 1);
  for (Index i = 0; i < rep.singular_values.size(); ++i) {
    if (rep.singular_values(i) > rel_tol * smax) ++rep.rank;
  }
  rep.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace closedloft
