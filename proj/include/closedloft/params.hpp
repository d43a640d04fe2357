#ifndef CLOSEDLOFT_PARAMS_HPP
#define CLOSEDLOFT_PARAMS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "closedloft/knot_vector.hpp"

namespace closedloft {

/// Parameter values assigned to a point sequence.
///
/// Closed sequences start at 0 and stop short of 1 (the wrap chord closes the
/// period); open sequences span [0, 1]. `shifted` marks values offset by half
/// the wrap gap, which even-degree closed interpolation uses.
struct ParameterValues {
  std::vector<double> values;
  bool closed = true;
  bool shifted = false;
  double exponent = 1.0;

  Index size() const { return static_cast<Index>(values.size()); }
  /// Index of the last point (the n of t_n).
  Index last() const { return size() - 1; }
  double operator[](Index i) const { return values[static_cast<std::size_t>(i)]; }
};

enum class ClosedKnotMethod { natural, averaging, shifting };

/// Domain knots for a closed interpolation together with the parameters the
/// system has to be assembled with.
struct ClosedKnots {
  DomainKnotsd domain;
  ParameterValues params;
};

/// Anchor domain knots and the bound values bracketing them:
/// bounds[i-1] < anchors[i] < bounds[i] for i = 1..n.
struct AnchorVectors {
  DomainKnotsd anchors;
  std::vector<double> bounds;
  int degree = 1;
};

/// Interval (lo, hi) each interior domain knot u_i must fall into.
using Bracket = std::pair<double, double>;

ParameterValues closed_parameters(const Points& points, double exponent = 1.0);
ParameterValues open_parameters(const Points& points, double exponent = 1.0);

/// 1 - t_n: the parameter length of the closing chord.
double wrap_gap(const ParameterValues& t);

/// t_i + d_n / 2.
ParameterValues shift_parameters(const ParameterValues& t);

/// Parameters a closed system of the given degree is assembled with:
/// unshifted for odd degrees, shifted for even degrees.
ParameterValues parity_parameters(const ParameterValues& t, int degree);

KnotVectord averaging_knots_open(const ParameterValues& t, int degree);

ClosedKnots closed_knots(const ParameterValues& t, ClosedKnotMethod method, int degree);

AnchorVectors anchor_vectors(const ParameterValues& t, int degree);

/// Brackets for i = 1..n from parity-correct parameters (t for odd degree,
/// shifted t for even degree).
std::vector<Bracket> interpolation_brackets(const ParameterValues& t, int degree);

/// True when knot strictly inside the bracket, with knot_tolerance margin.
bool strictly_inside(double knot, const Bracket& bracket);

bool check_conjecture1(const ParameterValues& t, const DomainKnotsd& domain, int degree);

struct Conjecture2Result {
  bool holds = false;
  std::optional<DomainKnotsd> witness;
};

/// Looks for n+2 knots of `domain` (keeping 0 and 1) that satisfy the
/// closed interpolation condition for `t`.
Conjecture2Result check_conjecture2(const ParameterValues& t, const DomainKnotsd& domain, int degree);

}  // namespace closedloft

#endif  // CLOSEDLOFT_PARAMS_HPP
