#ifndef CLOSEDLOFT_INTERP_HPP
#define CLOSEDLOFT_INTERP_HPP

#include "closedloft/curve.hpp"
#include "closedloft/linalg.hpp"

namespace closedloft {

/// Interpolating curves pass through their points within this multiple of the
/// point set's bounding-box diagonal.
constexpr double curve_residual_tolerance = 1e-8;

struct InterpolationResult {
  BSplineCurved curve;
  ParameterValues params;      // where each point is interpolated
  double max_residual = 0.0;   // model units
  double wrap_deviation = 0.0; // max |P_j - P_{n̂+1+j}| before the wrap copies were dropped
  bool condition_satisfied = true;
  RankReport diagnostics;
};

/// Closed interpolation through `points` at `params` on the cyclic knot vector
/// built from `domain`. Even degrees take shifted parameters.
struct ClosedInterpolationProblem {
  Points points;
  ParameterValues params;
  DomainKnotsd domain;
  int degree = 3;
};

enum class ConditionPolicy {
  enforce,  // refuse knots that violate the interpolation condition
  warn,     // record the verdict and attempt the solve anyway
};

/// Square open interpolation. Tries banded elimination without pivoting first
/// and falls back to a pivoted dense solve.
InterpolationResult interpolate_open(const Points& points, const ParameterValues& t, const KnotVectord& kv);

/// n̂ = n closed interpolation.
InterpolationResult interpolate_closed_square(const ClosedInterpolationProblem& problem,
                                              ConditionPolicy policy = ConditionPolicy::enforce);

/// n̂ >= n closed interpolation minimizing the stretch/bend energy.
InterpolationResult interpolate_closed_energy(const ClosedInterpolationProblem& problem,
                                              double alpha = default_stretch_weight,
                                              double beta = default_bend_weight);

/// P^T K P summed over coordinates (expanded controls for closed curves).
double curve_energy(const BSplineCurved& curve, double alpha = default_stretch_weight,
                    double beta = default_bend_weight);

struct InputKnotInterpolation {
  InterpolationResult closed;  // on the cyclic knot vector
  BSplineCurved clamped;       // same curve on a clamped knot vector
  KnotVectord updated_input;   // input knots merged with the clamped knots
  DomainKnotsd domain;
};

/// Domain knots for `t` that take the input knot nearest to each anchor when
/// it lies strictly inside the anchor's selection interval, else the anchor.
DomainKnotsd select_input_knots(const ParameterValues& t, const KnotVectord& input, int degree, double per);

/// Closed interpolation that reuses knots of `input` where they fall close
/// enough to the anchors. `per` in [0, 1] scales the admissible interval
/// around each anchor; `t` are unshifted closed parameters.
InputKnotInterpolation interpolate_points_by_input_knots(const Points& points, const ParameterValues& t,
                                                         const KnotVectord& input, int degree, double per);

/// Picks n+2 domain knots for parameters `t` from `input`, falling back to
/// the anchors; the result always satisfies the closed interpolation condition.
DomainKnotsd build_domain_knots_by_input_knots(const ParameterValues& t, const DomainKnotsd& input, int degree,
                                               double per);

/// Bracket (a, b) around anchor i scaled by per.
Bracket selection_interval(const AnchorVectors& anchors, Index i, double per);

}  // namespace closedloft

#endif  // CLOSEDLOFT_INTERP_HPP
