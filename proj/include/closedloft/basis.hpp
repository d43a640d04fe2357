#ifndef CLOSEDLOFT_BASIS_HPP
#define CLOSEDLOFT_BASIS_HPP

#include <limits>

#include "closedloft/knot_vector.hpp"

namespace closedloft {

/// The p+1 basis functions that may be nonzero at a parameter:
/// values(r) = N_{span-p+r, p}(u).
template <typename Scalar>
struct BasisValues {
  Index span = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;

  Index first() const { return span - values.size() + 1; }
};

/// Derivatives of the nonzero basis functions: ders(k, r) is the k-th
/// derivative of N_{span-p+r, p} at u.
template <typename Scalar>
struct BasisDerivatives {
  Index span = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ders;

  Index first() const { return span - ders.cols() + 1; }
};

// Cox-de Boor triangle, evaluated without divisions by zero-length spans.
template <typename Scalar>
BasisValues<Scalar> basis_functions(const KnotVector<Scalar>& kv, Scalar u) {
  const int p = kv.degree;
  const Index span = find_span(kv, u);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> N(p + 1), left(p + 1), right(p + 1);
  N(0) = Scalar(1);
  for (int j = 1; j <= p; ++j) {
    left(j) = u - kv[span + 1 - j];
    right(j) = kv[span + j] - u;
    Scalar saved = Scalar(0);
    for (int r = 0; r < j; ++r) {
      const Scalar temp = N(r) / (right(r + 1) + left(j - r));
      N(r) = saved + right(r + 1) * temp;
      saved = left(j - r) * temp;
    }
    N(j) = saved;
  }
  return {span, std::move(N)};
}

template <typename Scalar>
BasisDerivatives<Scalar> basis_derivatives(const KnotVector<Scalar>& kv, Scalar u, int order) {
  const int p = kv.degree;
  if (order < 0 || order > p) fail(ErrorKind::invalid_input, "derivative order must lie in [0, p]");
  const Index span = find_span(kv, u);
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat ndu(p + 1, p + 1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> left(p + 1), right(p + 1);
  ndu(0, 0) = Scalar(1);
  for (int j = 1; j <= p; ++j) {
    left(j) = u - kv[span + 1 - j];
    right(j) = kv[span + j] - u;
    Scalar saved = Scalar(0);
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right(r + 1) + left(j - r);
      const Scalar temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right(r + 1) * temp;
      saved = left(j - r) * temp;
    }
    ndu(j, j) = saved;
  }

  Mat ders = Mat::Zero(order + 1, p + 1);
  for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

  Mat a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = Scalar(1);
    for (int k = 1; k <= order; ++k) {
      Scalar d = Scalar(0);
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  Scalar factor = Scalar(p);
  for (int k = 1; k <= order; ++k) {
    ders.row(k) *= factor;
    factor *= Scalar(p - k);
  }
  return {span, std::move(ders)};
}

/// All basis_count() basis values at u, zeros included.
template <typename Scalar>
Eigen::Matrix<Scalar, 1, Eigen::Dynamic> basis_row(const KnotVector<Scalar>& kv, Scalar u) {
  const auto b = basis_functions(kv, u);
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(kv.basis_count());
  row.segment(b.first(), b.values.size()) = b.values.transpose();
  return row;
}

}  // namespace closedloft

#endif  // CLOSEDLOFT_BASIS_HPP
