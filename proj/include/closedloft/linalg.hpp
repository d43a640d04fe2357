#ifndef CLOSEDLOFT_LINALG_HPP
#define CLOSEDLOFT_LINALG_HPP

#include <optional>

#include "closedloft/params.hpp"

namespace closedloft {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct RankReport {
  Index rank = 0;
  VectorXd singular_values;  // non-increasing
  double condition = 0.0;    // sigma_max / sigma_min (infinite when sigma_min is 0)
  double tolerance = 0.0;    // relative threshold used for the rank

  double sigma_ratio() const {
    if (singular_values.size() == 0 || singular_values(0) == 0.0) return 0.0;
    return singular_values(singular_values.size() - 1) / singular_values(0);
  }
};

constexpr double default_rank_tolerance = 1e-12;
constexpr double default_stretch_weight = 1.0;
constexpr double default_bend_weight = 0.2;

/// Closed interpolation matrix: basis rows stacked over the wrap rows.
struct ClosedSystem {
  MatrixXd matrix;
  Index basis_rows = 0;  // n+1
  Index wrap_rows = 0;   // p
};

/// entry (i, j) = N_{j,p}(t_i).
MatrixXd assemble_open_collocation(const ParameterValues& t, const KnotVectord& kv);

/// Ñ for a cyclic knot vector with n̂+1 distinct controls; columns address
/// the n̂+p+1 expanded controls. Wrap row r reads P_r - P_{n̂+1+r} = 0.
ClosedSystem assemble_closed_system(const ParameterValues& t, const KnotVectord& kv, Index nhat);

/// Q stacked over p zero rows.
MatrixXd closed_rhs(const Points& points, int degree);

/// LU with partial pivoting. Throws a singular error when a pivot falls
/// below 1e-14 of the largest entry.
MatrixXd solve_dense(const MatrixXd& m, const MatrixXd& rhs);

/// Banded Gaussian elimination without pivoting; `half_bandwidth` bounds
/// |i - j| for nonzero entries. Returns nullopt on a zero pivot so the caller
/// can fall back to solve_dense.
std::optional<MatrixXd> solve_banded_no_pivot(const MatrixXd& m, Index half_bandwidth, const MatrixXd& rhs);

/// K = ∫ alpha N' N'^T + beta N'' N''^T over the curve domain, by (p+1)-point
/// Gauss-Legendre per non-empty span.
MatrixXd stiffness_matrix(const KnotVectord& kv, double alpha = default_stretch_weight,
                          double beta = default_bend_weight);

struct KktSolution {
  MatrixXd solution;     // one column per coordinate
  MatrixXd multipliers;
};

/// Minimizes x^T K x subject to C x = rhs, column by column. Multipliers
/// satisfy K x + C^T lambda = 0. Throws singular when C lacks full row rank
/// or K is not positive definite on the null space of C.
KktSolution solve_kkt(const MatrixXd& k, const MatrixXd& c, const MatrixXd& rhs);

RankReport rank_report(const MatrixXd& m, double rel_tol = default_rank_tolerance);

}  // namespace closedloft

#endif  // CLOSEDLOFT_LINALG_HPP
