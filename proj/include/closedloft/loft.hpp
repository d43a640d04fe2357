#ifndef CLOSEDLOFT_LOFT_HPP
#define CLOSEDLOFT_LOFT_HPP

#include <vector>

#include "closedloft/interp.hpp"
#include "closedloft/surface.hpp"

namespace closedloft {

/// Lofted surfaces interpolate every input point within this multiple of the
/// bounding-box diagonal of all rows.
constexpr double surface_residual_tolerance = 1e-6;

/// Rows of contour points. After alignment, row i is the input row started at
/// input index baseline[i], traversed backwards when reversed[i].
struct ContourRows {
  std::vector<Points> rows;
  bool aligned = false;
  std::vector<Index> baseline;
  std::vector<bool> reversed;

  Index size() const { return static_cast<Index>(rows.size()); }
};

struct LoftOptions {
  int degree_u = 3;  // longitudinal (across rows)
  int degree_v = 3;  // along the contours
  double per = 1.0;
  double alpha = default_stretch_weight;
  double beta = default_bend_weight;
  double exponent = 1.0;
};

struct RowDiagnostics {
  ParameterValues params;  // v parameter of each row point on the surface
  DomainKnotsd domain;     // domain knots the row was interpolated on
  double max_residual = 0.0;
  RankReport rank;
};

struct CompatibleCurves {
  std::vector<BSplineCurved> curves;  // open, all on `common`
  KnotVectord common;
  std::vector<RowDiagnostics> rows;
};

struct LoftResult {
  BSplineSurfaced surface;
  KnotVectord common_knots;  // v direction
  std::vector<RowDiagnostics> rows;
  std::vector<double> row_params;  // u parameter of each row
  double max_residual = 0.0;

  Index net_rows() const { return surface.rows; }
  Index net_cols() const { return surface.cols; }
  Index interior_knot_count() const { return common_knots.size() - 2 * (common_knots.degree + 1); }
};

/// Chains row starts by nearest distance to the previous row's start and
/// reverses rows whose winding opposes the previous row.
ContourRows align_contours(const ContourRows& rows);

/// Applies explicit per-row start indices and orientation flags.
ContourRows apply_alignment(const ContourRows& rows, const std::vector<Index>& starts,
                            const std::vector<bool>& reversed);

/// Closed interpolation of every row on knots threaded through the rows,
/// followed by refinement onto the common knot vector.
CompatibleCurves interpolate_all_row_points(const ContourRows& rows, int degree_v, double per,
                                            double exponent = 1.0);

/// Common domain knots admitting an interpolating closed curve for every row.
DomainKnotsd build_common_domain_knots(const ContourRows& rows, int degree_v, double per, double exponent = 1.0);

/// Union of the per-row natural (odd degree) or shifting (even degree)
/// clamped knot vectors: what plain skinning needs.
KnotVectord traditional_common_knots(const ContourRows& rows, int degree_v, double exponent = 1.0);

LoftResult loft_closed_piegl(const ContourRows& rows, const LoftOptions& options);
LoftResult loft_closed_park(const ContourRows& rows, const LoftOptions& options);

/// Skinning of open sections with averaging knots per row.
LoftResult loft_open(const ContourRows& rows, const LoftOptions& options);

/// max ||S(s_i, t_ij) - Q_ij|| over all input points.
double surface_residual(const BSplineSurfaced& surface, const std::vector<double>& row_params,
                        const std::vector<RowDiagnostics>& diagnostics, const ContourRows& rows);

}  // namespace closedloft

#endif  // CLOSEDLOFT_LOFT_HPP
