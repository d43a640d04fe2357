#include "closedloft/loft.hpp"

#include <sstream>

namespace closedloft {

namespace {

template <typename F>
auto with_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), e.what(), stage);
  }
}

std::string row_stage(const char* what, Index row) {
  std::ostringstream s;
  s << what << " row " << row;
  return s.str();
}

Point3d newell_normal(const Points& pts) {
  Point3d n = Point3d::Zero();
  const Index count = pts.rows();
  for (Index k = 0; k < count; ++k) {
    const Point3d a = pts.row(k).transpose();
    const Point3d b = pts.row((k + 1) % count).transpose();
    n.x() += (a.y() - b.y()) * (a.z() + b.z());
    n.y() += (a.z() - b.z()) * (a.x() + b.x());
    n.z() += (a.x() - b.x()) * (a.y() + b.y());
  }
  return n;
}

/// Row traversed from `start`, backwards when `reverse`.
Points reorder(const Points& row, Index start, bool reverse) {
  const Index count = row.rows();
  Points out(count, 3);
  for (Index k = 0; k < count; ++k) {
    const Index src = reverse ? (start - k + count) % count : (start + k) % count;
    out.row(k) = row.row(src);
  }
  return out;
}

void require_rows(const ContourRows& rows, int min_rows, int degree_v, bool closed) {
  if (rows.size() < min_rows) {
    std::ostringstream msg;
    msg << "need at least " << min_rows << " rows, got " << rows.size();
    fail(ErrorKind::invalid_input, msg.str());
  }
  const Index min_points = closed ? degree_v + 2 : degree_v + 1;
  for (Index i = 0; i < rows.size(); ++i) {
    if (rows.rows[static_cast<std::size_t>(i)].rows() < min_points) {
      std::ostringstream msg;
      msg << "row " << i << " has " << rows.rows[static_cast<std::size_t>(i)].rows() << " points; degree "
          << degree_v << " needs at least " << min_points;
      fail(ErrorKind::invalid_input, msg.str());
    }
  }
}

std::vector<ParameterValues> row_parameters(const ContourRows& rows, double exponent) {
  std::vector<ParameterValues> out;
  for (Index i = 0; i < rows.size(); ++i) {
    out.push_back(with_stage(row_stage("parameterize", i),
                             [&] { return closed_parameters(rows.rows[static_cast<std::size_t>(i)], exponent); }));
  }
  return out;
}

/// Mean parameters of the rows with the most points.
ParameterValues averaged_longest(const std::vector<ParameterValues>& params) {
  Index longest = 0;
  for (const auto& t : params) longest = std::max(longest, t.size());
  ParameterValues avg{std::vector<double>(static_cast<std::size_t>(longest), 0.0), true, false,
                      params.front().exponent};
  int count = 0;
  for (const auto& t : params) {
    if (t.size() != longest) continue;
    for (Index k = 0; k < longest; ++k) avg.values[static_cast<std::size_t>(k)] += t[k];
    ++count;
  }
  for (double& v : avg.values) v /= count;
  return avg;
}

ClosedKnotMethod parity_method(int degree) {
  return degree % 2 == 1 ? ClosedKnotMethod::natural : ClosedKnotMethod::shifting;
}

double all_points_diagonal(const ContourRows& rows) {
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (const auto& r : rows.rows) {
    lo = lo.cwiseMin(r.colwise().minCoeff().transpose());
    hi = hi.cwiseMax(r.colwise().maxCoeff().transpose());
  }
  return (hi - lo).norm();
}

/// Interpolates the control columns of compatible row curves with open
/// curves of degree p over averaged chord-length parameters.
LoftResult skin(const CompatibleCurves& compat, const ContourRows& rows, int degree_u, bool closed) {
  const auto& curves = compat.curves;
  const Index m1 = static_cast<Index>(curves.size());
  const Index cols = curves.front().controls.rows();

  std::vector<double> s(static_cast<std::size_t>(m1), 0.0);
  int used = 0;
  for (Index j = 0; j < cols; ++j) {
    std::vector<double> cum(static_cast<std::size_t>(m1), 0.0);
    for (Index i = 1; i < m1; ++i) {
      cum[static_cast<std::size_t>(i)] = cum[static_cast<std::size_t>(i - 1)] +
                                         (curves[static_cast<std::size_t>(i)].controls.row(j) -
                                          curves[static_cast<std::size_t>(i - 1)].controls.row(j))
                                             .norm();
    }
    const double total = cum.back();
    if (!(total > 0.0)) continue;
    for (Index i = 0; i < m1; ++i) s[static_cast<std::size_t>(i)] += cum[static_cast<std::size_t>(i)] / total;
    ++used;
  }
  if (used == 0) fail(ErrorKind::invalid_input, "all rows coincide; cannot parameterize the lofting direction", "skin");
  for (double& v : s) v /= used;
  s.front() = 0.0;
  s.back() = 1.0;
  for (Index i = 1; i < m1; ++i) {
    if (!(s[static_cast<std::size_t>(i)] > s[static_cast<std::size_t>(i - 1)]))
      fail(ErrorKind::invalid_input, row_stage("consecutive rows coincide at", i), "skin");
  }
  ParameterValues sp{s, false, false, 1.0};
  const auto knots_u = with_stage("skin", [&] { return averaging_knots_open(sp, degree_u); });

  // One solve for all columns and coordinates.
  const MatrixXd n = assemble_open_collocation(sp, knots_u);
  MatrixXd rhs(m1, 3 * cols);
  for (Index i = 0; i < m1; ++i) {
    const auto& c = curves[static_cast<std::size_t>(i)].controls;
    for (Index j = 0; j < cols; ++j) rhs.block(i, 3 * j, 1, 3) = c.row(j);
  }
  MatrixXd sol;
  if (auto banded = solve_banded_no_pivot(n, degree_u, rhs))
    sol = std::move(*banded);
  else
    sol = with_stage("skin", [&] { return solve_dense(n, rhs); });

  LoftResult out;
  out.surface.knots_u = knots_u;
  out.surface.knots_v = compat.common;
  out.surface.rows = m1;
  out.surface.cols = cols;
  out.surface.net.resize(m1 * cols, 3);
  out.surface.closed_v = closed;
  for (Index i = 0; i < m1; ++i)
    for (Index j = 0; j < cols; ++j) out.surface.point(i, j) = sol.block(i, 3 * j, 1, 3);
  out.common_knots = compat.common;
  out.rows = compat.rows;
  out.row_params = std::move(s);
  out.max_residual = surface_residual(out.surface, out.row_params, out.rows, rows);
  const double limit = surface_residual_tolerance * all_points_diagonal(rows);
  if (out.max_residual > limit) {
    std::ostringstream msg;
    msg << "surface residual " << out.max_residual << " exceeds " << limit;
    fail(ErrorKind::singular, msg.str(), "skin");
  }
  return out;
}

ContourRows prepared(const ContourRows& rows) { return rows.aligned ? rows : align_contours(rows); }

}  // namespace

ContourRows align_contours(const ContourRows& rows) {
  if (rows.size() < 1) fail(ErrorKind::invalid_input, "no rows to align", "align");
  ContourRows out;
  out.aligned = true;
  for (Index i = 0; i < rows.size(); ++i) {
    const Points& cur = rows.rows[static_cast<std::size_t>(i)];
    if (cur.rows() == 0 || !(bbox_diagonal(cur) > 0.0))
      fail(ErrorKind::invalid_input, row_stage("all points coincide in", i), "align");
    if (i == 0) {
      out.rows.push_back(cur);
      out.baseline.push_back(0);
      out.reversed.push_back(false);
      continue;
    }
    const Points& prev = out.rows.back();
    const bool reverse = newell_normal(prev).dot(newell_normal(cur)) < 0.0;
    const Points seq = reorder(cur, 0, reverse);
    Index best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < seq.rows(); ++k) {
      const double d = (seq.row(k) - prev.row(0)).squaredNorm();
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    const Index start = reverse ? (seq.rows() - best) % seq.rows() : best;
    out.rows.push_back(reorder(cur, start, reverse));
    out.baseline.push_back(start);
    out.reversed.push_back(reverse);
  }
  return out;
}

ContourRows apply_alignment(const ContourRows& rows, const std::vector<Index>& starts,
                            const std::vector<bool>& reversed) {
  if (static_cast<Index>(starts.size()) != rows.size() || static_cast<Index>(reversed.size()) != rows.size())
    fail(ErrorKind::invalid_input, "alignment hints must cover every row", "align");
  ContourRows out;
  out.aligned = true;
  for (Index i = 0; i < rows.size(); ++i) {
    const Points& cur = rows.rows[static_cast<std::size_t>(i)];
    const Index start = starts[static_cast<std::size_t>(i)];
    if (start < 0 || start >= cur.rows())
      fail(ErrorKind::invalid_input, row_stage("start index out of range in", i), "align");
    out.rows.push_back(reorder(cur, start, reversed[static_cast<std::size_t>(i)]));
  }
  out.baseline = starts;
  out.reversed = reversed;
  return out;
}

CompatibleCurves interpolate_all_row_points(const ContourRows& rows, int degree_v, double per, double exponent) {
  if (!(per >= 0.0 && per <= 1.0)) fail(ErrorKind::invalid_input, "per must lie in [0,1]");
  require_rows(rows, 1, degree_v, true);
  const auto params = row_parameters(rows, exponent);
  const auto seed = closed_knots(averaged_longest(params), parity_method(degree_v), degree_v);
  KnotVectord input = clamped_knot_vector(seed.domain, degree_v);

  CompatibleCurves out;
  std::vector<BSplineCurved> clamped;
  for (Index i = 0; i < rows.size(); ++i) {
    auto res = with_stage(row_stage("interpolate", i), [&] {
      return interpolate_points_by_input_knots(rows.rows[static_cast<std::size_t>(i)],
                                               params[static_cast<std::size_t>(i)], input, degree_v, per);
    });
    input = std::move(res.updated_input);
    // The common vector collects only knots some row actually uses.
    out.common = i == 0 ? res.clamped.knots : merge_knot_vectors(out.common, res.clamped.knots);
    out.rows.push_back({res.closed.params, res.domain, res.closed.max_residual, res.closed.diagnostics});
    clamped.push_back(std::move(res.clamped));
  }
  for (Index i = 0; i < rows.size(); ++i) {
    out.curves.push_back(
        with_stage(row_stage("refine", i), [&] { return refine_to(clamped[static_cast<std::size_t>(i)], out.common); }));
  }
  return out;
}

DomainKnotsd build_common_domain_knots(const ContourRows& rows, int degree_v, double per, double exponent) {
  if (!(per >= 0.0 && per <= 1.0)) fail(ErrorKind::invalid_input, "per must lie in [0,1]");
  require_rows(rows, 1, degree_v, true);
  const auto params = row_parameters(rows, exponent);
  DomainKnotsd input = anchor_vectors(averaged_longest(params), degree_v).anchors;
  DomainKnotsd selected;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto row_knots = build_domain_knots_by_input_knots(params[i], input, degree_v, per);
    input = merge_domain_knots(input, row_knots);
    selected = i == 0 ? row_knots : merge_domain_knots(selected, row_knots);
  }
  return selected;
}

KnotVectord traditional_common_knots(const ContourRows& rows, int degree_v, double exponent) {
  require_rows(rows, 1, degree_v, true);
  const auto params = row_parameters(rows, exponent);
  KnotVectord common;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto kv = clamped_knot_vector(closed_knots(params[i], parity_method(degree_v), degree_v).domain, degree_v);
    common = i == 0 ? kv : merge_knot_vectors(common, kv);
  }
  return common;
}

LoftResult loft_closed_piegl(const ContourRows& input, const LoftOptions& opt) {
  if (opt.degree_u < 1 || opt.degree_v < 1) fail(ErrorKind::invalid_input, "degrees must be at least 1");
  const auto rows = prepared(input);
  require_rows(rows, opt.degree_u + 1, opt.degree_v, true);
  const auto compat = interpolate_all_row_points(rows, opt.degree_v, opt.per, opt.exponent);
  return skin(compat, rows, opt.degree_u, true);
}

LoftResult loft_closed_park(const ContourRows& input, const LoftOptions& opt) {
  if (opt.degree_u < 1 || opt.degree_v < 1) fail(ErrorKind::invalid_input, "degrees must be at least 1");
  if (!(opt.per >= 0.0 && opt.per <= 1.0)) fail(ErrorKind::invalid_input, "per must lie in [0,1]");
  const auto rows = prepared(input);
  require_rows(rows, opt.degree_u + 1, opt.degree_v, true);
  const int q = opt.degree_v;
  const auto domain = build_common_domain_knots(rows, q, opt.per, opt.exponent);
  const auto params = row_parameters(rows, opt.exponent);

  CompatibleCurves compat;
  for (Index i = 0; i < rows.size(); ++i) {
    const ClosedInterpolationProblem problem{rows.rows[static_cast<std::size_t>(i)],
                                             parity_parameters(params[static_cast<std::size_t>(i)], q), domain, q};
    auto res = with_stage(row_stage("interpolate", i),
                          [&] { return interpolate_closed_energy(problem, opt.alpha, opt.beta); });
    // Every row shares the cyclic knot vector, so clamping alone makes them compatible.
    compat.curves.push_back(clamp_closed_curve(res.curve));
    compat.rows.push_back({res.params, domain, res.max_residual, res.diagnostics});
  }
  compat.common = compat.curves.front().knots;
  return skin(compat, rows, opt.degree_u, true);
}

LoftResult loft_open(const ContourRows& rows, const LoftOptions& opt) {
  if (opt.degree_u < 1 || opt.degree_v < 1) fail(ErrorKind::invalid_input, "degrees must be at least 1");
  require_rows(rows, opt.degree_u + 1, opt.degree_v, false);
  CompatibleCurves compat;
  std::vector<BSplineCurved> curves;
  for (Index i = 0; i < rows.size(); ++i) {
    const auto& pts = rows.rows[static_cast<std::size_t>(i)];
    auto res = with_stage(row_stage("interpolate", i), [&] {
      const auto t = open_parameters(pts, opt.exponent);
      return interpolate_open(pts, t, averaging_knots_open(t, opt.degree_v));
    });
    compat.common = i == 0 ? res.curve.knots : merge_knot_vectors(compat.common, res.curve.knots);
    compat.rows.push_back({res.params, {res.curve.knots.domain_knots()}, res.max_residual, res.diagnostics});
    curves.push_back(std::move(res.curve));
  }
  for (Index i = 0; i < rows.size(); ++i) {
    compat.curves.push_back(with_stage(row_stage("refine", i), [&] {
      return refine_to(curves[static_cast<std::size_t>(i)], compat.common);
    }));
  }
  return skin(compat, rows, opt.degree_u, false);
}

double surface_residual(const BSplineSurfaced& surface, const std::vector<double>& row_params,
                        const std::vector<RowDiagnostics>& diagnostics, const ContourRows& rows) {
  double worst = 0.0;
  for (Index i = 0; i < rows.size(); ++i) {
    const auto& pts = rows.rows[static_cast<std::size_t>(i)];
    const auto& t = diagnostics[static_cast<std::size_t>(i)].params;
    for (Index j = 0; j < pts.rows(); ++j) {
      const Point3d s = eval_surface(surface, row_params[static_cast<std::size_t>(i)], t[j]);
      worst = std::max(worst, (s - pts.row(j).transpose()).norm());
    }
  }
  return worst;
}

}  // namespace closedloft
