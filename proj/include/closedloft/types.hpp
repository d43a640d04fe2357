#ifndef CLOSEDLOFT_TYPES_HPP
#define CLOSEDLOFT_TYPES_HPP

#include <Eigen/Dense>

namespace closedloft {

using Index = Eigen::Index;

template <typename Scalar>
using Point3 = Eigen::Matrix<Scalar, 3, 1>;

/// One point per row.
template <typename Scalar>
using PointRows = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

using Point3d = Point3<double>;
using Points = PointRows<double>;

/// Diagonal of the axis-aligned bounding box of a point set.
template <typename Derived>
typename Derived::Scalar bbox_diagonal(const Eigen::MatrixBase<Derived>& pts) {
  if (pts.rows() == 0) return typename Derived::Scalar(0);
  return (pts.colwise().maxCoeff() - pts.colwise().minCoeff()).norm();
}

}  // namespace closedloft

#endif  // CLOSEDLOFT_TYPES_HPP
