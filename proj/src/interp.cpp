#include "closedloft/interp.hpp"

#include <sstream>

namespace closedloft {

namespace {

double max_residual(const BSplineCurved& curve, const Points& points, const ParameterValues& t) {
  double worst = 0.0;
  for (Index i = 0; i < points.rows(); ++i)
    worst = std::max(worst, (eval_curve(curve, t[i]) - points.row(i).transpose()).norm());
  return worst;
}

void check_residual(const InterpolationResult& r, const Points& points) {
  const double limit = curve_residual_tolerance * std::max(bbox_diagonal(points), 1e-300);
  if (r.max_residual > limit) {
    std::ostringstream msg;
    msg << "interpolation residual " << r.max_residual << " exceeds " << limit << " (sigma_min/sigma_max = "
        << r.diagnostics.sigma_ratio() << ")";
    fail(ErrorKind::singular, msg.str());
  }
}

void require_closed_problem(const ClosedInterpolationProblem& pr) {
  const int p = pr.degree;
  if (p < 1) fail(ErrorKind::invalid_input, "degree must be at least 1");
  if (pr.points.rows() != pr.params.size())
    fail(ErrorKind::invalid_input, "one parameter per point required");
  if (pr.points.rows() < p + 2) {
    std::ostringstream msg;
    msg << "closed interpolation of degree " << p << " needs at least " << p + 2 << " points, got "
        << pr.points.rows();
    fail(ErrorKind::invalid_input, msg.str());
  }
  if (pr.domain.size() < pr.params.size() + 1)
    fail(ErrorKind::invalid_input, "need at least n+2 domain knots for n+1 points");
  for (double v : pr.params.values) {
    if (!(v >= 0.0 && v < 1.0)) fail(ErrorKind::invalid_input, "closed parameters must lie in [0, 1)");
  }
}

InterpolationResult finish_closed(const ClosedInterpolationProblem& pr, KnotVectord kv, const MatrixXd& expanded,
                                  RankReport diagnostics, bool condition) {
  const Index nhat = pr.domain.last_interior();
  const int p = pr.degree;
  double wrap = 0.0;
  for (Index r = 0; r < p; ++r) wrap = std::max(wrap, (expanded.row(r) - expanded.row(nhat + 1 + r)).norm());
  InterpolationResult out{closed_from_expanded<double>(std::move(kv), expanded), pr.params, 0.0, wrap, condition,
                          std::move(diagnostics)};
  out.max_residual = max_residual(out.curve, pr.points, pr.params);
  return out;
}

}  // namespace

InterpolationResult interpolate_open(const Points& points, const ParameterValues& t, const KnotVectord& kv) {
  if (kv.style != KnotStyle::clamped) fail(ErrorKind::invalid_input, "open interpolation needs a clamped knot vector");
  if (points.rows() != t.size()) fail(ErrorKind::invalid_input, "one parameter per point required");
  if (kv.basis_count() != points.rows()) {
    std::ostringstream msg;
    msg << "square open interpolation needs " << kv.basis_count() << " points, got " << points.rows();
    fail(ErrorKind::invalid_input, msg.str());
  }
  const MatrixXd n = assemble_open_collocation(t, kv);
  auto diagnostics = rank_report(n);
  MatrixXd controls;
  if (auto banded = solve_banded_no_pivot(n, kv.degree, points)) {
    controls = std::move(*banded);
  } else {
    try {
      controls = solve_dense(n, points);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << e.what() << " (rank " << diagnostics.rank << " of " << n.rows() << ")";
      fail(ErrorKind::singular, msg.str());
    }
  }
  InterpolationResult out{{kv, controls, CurveKind::open}, t, 0.0, 0.0, true, std::move(diagnostics)};
  out.max_residual = max_residual(out.curve, points, t);
  check_residual(out, points);
  return out;
}

InterpolationResult interpolate_closed_square(const ClosedInterpolationProblem& pr, ConditionPolicy policy) {
  require_closed_problem(pr);
  if (pr.domain.size() != pr.params.size() + 1)
    fail(ErrorKind::invalid_input, "square closed interpolation needs exactly n+2 domain knots");
  bool condition = false;
  try {
    condition = check_conjecture1(pr.params, pr.domain, pr.degree);
  } catch (const Error& e) {
    // Parameters of the wrong parity (natural knots at even degree) fall
    // outside the condition; under warn they are solved anyway.
    if (policy == ConditionPolicy::enforce || e.kind() != ErrorKind::precondition) throw;
  }
  if (!condition && policy == ConditionPolicy::enforce)
    fail(ErrorKind::precondition, "parameters and domain knots violate the closed interpolation condition");

  auto kv = cyclic_knot_vector(pr.domain, pr.degree);
  const Index nhat = pr.domain.last_interior();
  const auto sys = assemble_closed_system(pr.params, kv, nhat);
  auto diagnostics = rank_report(sys.matrix);
  MatrixXd expanded;
  try {
    expanded = solve_dense(sys.matrix, closed_rhs(pr.points, pr.degree));
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << e.what() << " (rank " << diagnostics.rank << " of " << sys.matrix.rows()
        << ", interpolation condition " << (condition ? "satisfied" : "violated") << ")";
    fail(ErrorKind::singular, msg.str());
  }
  auto out = finish_closed(pr, std::move(kv), expanded, std::move(diagnostics), condition);
  check_residual(out, pr.points);
  return out;
}

InterpolationResult interpolate_closed_energy(const ClosedInterpolationProblem& pr, double alpha, double beta) {
  require_closed_problem(pr);
  const auto verdict = check_conjecture2(pr.params, pr.domain, pr.degree);
  if (!verdict.holds)
    fail(ErrorKind::precondition, "domain knots contain no subset satisfying the closed interpolation condition");

  auto kv = cyclic_knot_vector(pr.domain, pr.degree);
  const Index nhat = pr.domain.last_interior();
  const auto sys = assemble_closed_system(pr.params, kv, nhat);
  auto diagnostics = rank_report(sys.matrix);
  const MatrixXd k = stiffness_matrix(kv, alpha, beta);
  const auto kkt = solve_kkt(k, sys.matrix, closed_rhs(pr.points, pr.degree));
  auto out = finish_closed(pr, std::move(kv), kkt.solution, std::move(diagnostics), true);
  check_residual(out, pr.points);
  return out;
}

double curve_energy(const BSplineCurved& curve, double alpha, double beta) {
  const MatrixXd k = stiffness_matrix(curve.knots, alpha, beta);
  const MatrixXd p = expanded_controls(curve);
  return (p.transpose() * k * p).trace();
}

Bracket selection_interval(const AnchorVectors& anchors, Index i, double per) {
  const double anchor = anchors.anchors[i];
  const double lo = anchors.bounds[static_cast<std::size_t>(i - 1)];
  const double hi = anchors.bounds[static_cast<std::size_t>(i)];
  return {(1.0 - per) * anchor + per * lo, (1.0 - per) * anchor + per * hi};
}

DomainKnotsd select_input_knots(const ParameterValues& t, const KnotVectord& input, int degree, double per) {
  if (!(per >= 0.0 && per <= 1.0)) fail(ErrorKind::invalid_input, "per must lie in [0,1]");
  if (input.style != KnotStyle::clamped || input.degree != degree)
    fail(ErrorKind::invalid_input, "input knot vector must be clamped with the interpolation degree");
  const auto anchors = anchor_vectors(t, degree);
  const Index n = t.last();

  std::vector<double> distinct;
  for (const auto& g : knot_groups(input.knots)) distinct.push_back(g.first);

  DomainKnotsd domain{{0.0}};
  for (Index i = 1; i <= n; ++i) {
    const double anchor = anchors.anchors[i];
    const auto interval = selection_interval(anchors, i, per);
    // nearest input knot; ties go to the smaller one
    auto it = std::lower_bound(distinct.begin(), distinct.end(), anchor);
    double nearest = it != distinct.end() ? *it : distinct.back();
    if (it != distinct.begin()) {
      const double below = *std::prev(it);
      if (it == distinct.end() || anchor - below <= *it - anchor) nearest = below;
    }
    const double prev = domain.values.back();
    const bool usable = strictly_inside(nearest, interval) && nearest > prev + knot_tolerance<double>();
    domain.values.push_back(usable ? nearest : anchor);
  }
  domain.values.push_back(1.0);
  return domain;
}

InputKnotInterpolation interpolate_points_by_input_knots(const Points& points, const ParameterValues& t,
                                                         const KnotVectord& input, int degree, double per) {
  auto domain = select_input_knots(t, input, degree, per);
  ClosedInterpolationProblem problem{points, parity_parameters(t, degree), domain, degree};
  auto closed = interpolate_closed_square(problem);
  auto clamped = clamp_closed_curve(closed.curve);
  auto updated = merge_knot_vectors(input, clamped.knots);
  return {std::move(closed), std::move(clamped), std::move(updated), std::move(domain)};
}

DomainKnotsd build_domain_knots_by_input_knots(const ParameterValues& t, const DomainKnotsd& input, int degree,
                                               double per) {
  if (!(per >= 0.0 && per <= 1.0)) fail(ErrorKind::invalid_input, "per must lie in [0,1]");
  validate_domain(input);
  const auto anchors = anchor_vectors(t, degree);
  const Index n = t.last();
  const Index last = input.size() - 1;  // n̂ + 1
  const double tol = knot_tolerance<double>();

  DomainKnotsd out{std::vector<double>(static_cast<std::size_t>(n + 2))};
  auto& u = out.values;
  u.front() = 0.0;
  u.back() = 1.0;
  Index span = 0;
  Index i = 1;
  for (; i <= n; ++i) {
    const auto [a, b] = selection_interval(anchors, i, per);
    bool exhausted = false;
    // Knots on the interval ends do not qualify: the condition is strict.
    while (!(input[i + span] > a + tol)) {
      ++span;
      if (i + span > last) {
        exhausted = true;
        break;
      }
    }
    if (exhausted) break;
    const double candidate = input[i + span];
    const double prev = u[static_cast<std::size_t>(i - 1)];
    if (candidate < b - tol && candidate > prev + tol) {
      u[static_cast<std::size_t>(i)] = candidate;
    } else {
      u[static_cast<std::size_t>(i)] = anchors.anchors[i];
      --span;
    }
  }
  for (Index k = i; k <= n; ++k) u[static_cast<std::size_t>(k)] = anchors.anchors[k];
  return out;
}

}  // namespace closedloft
