#include "closedloft/params.hpp"

#include <cmath>
#include <sstream>

namespace closedloft {

namespace {

void require_exponent(double e) {
  if (!(e > 0.0 && e <= 1.0)) fail(ErrorKind::invalid_input, "parameter exponent must lie in (0, 1]");
}

std::vector<double> chord_weights(const Points& points, double exponent, bool wrap) {
  const Index count = points.rows();
  const Index chords = wrap ? count : count - 1;
  if (!points.allFinite()) fail(ErrorKind::invalid_input, "points must be finite");
  std::vector<double> w(static_cast<std::size_t>(chords));
  for (Index j = 0; j < chords; ++j) {
    const double len = (points.row((j + 1) % count) - points.row(j)).norm();
    if (!(len > 0.0)) {
      std::ostringstream msg;
      msg << "points " << j << " and " << (j + 1) % count << " coincide";
      fail(ErrorKind::invalid_input, msg.str());
    }
    w[static_cast<std::size_t>(j)] = std::pow(len, exponent);
  }
  return w;
}

void require_parity(const ParameterValues& t, int degree) {
  if (!t.closed) fail(ErrorKind::precondition, "closed interpolation needs closed parameters");
  const bool even = degree % 2 == 0;
  if (even != t.shifted) {
    fail(ErrorKind::precondition, even ? "even degree requires shifted parameters"
                                       : "odd degree requires unshifted parameters");
  }
}

void require_unshifted_closed(const ParameterValues& t) {
  if (!t.closed || t.shifted) fail(ErrorKind::precondition, "expected unshifted closed parameters");
  if (t.size() < 2) fail(ErrorKind::invalid_input, "need at least two parameters");
}

}  // namespace

ParameterValues closed_parameters(const Points& points, double exponent) {
  require_exponent(exponent);
  if (points.rows() < 3) fail(ErrorKind::invalid_input, "closed parameterization needs at least 3 points");
  const auto w = chord_weights(points, exponent, true);
  double total = 0.0;
  for (double x : w) total += x;
  ParameterValues t{{}, true, false, exponent};
  t.values.reserve(static_cast<std::size_t>(points.rows()));
  double acc = 0.0;
  t.values.push_back(0.0);
  for (Index i = 1; i < points.rows(); ++i) {
    acc += w[static_cast<std::size_t>(i - 1)];
    t.values.push_back(acc / total);
  }
  return t;
}

ParameterValues open_parameters(const Points& points, double exponent) {
  require_exponent(exponent);
  if (points.rows() < 2) fail(ErrorKind::invalid_input, "open parameterization needs at least 2 points");
  const auto w = chord_weights(points, exponent, false);
  double total = 0.0;
  for (double x : w) total += x;
  ParameterValues t{{}, false, false, exponent};
  double acc = 0.0;
  t.values.push_back(0.0);
  for (Index i = 1; i + 1 < points.rows(); ++i) {
    acc += w[static_cast<std::size_t>(i - 1)];
    t.values.push_back(acc / total);
  }
  t.values.push_back(1.0);
  return t;
}

double wrap_gap(const ParameterValues& t) { return 1.0 - t.values.back(); }

ParameterValues shift_parameters(const ParameterValues& t) {
  require_unshifted_closed(t);
  ParameterValues out = t;
  const double half = 0.5 * wrap_gap(t);
  for (double& v : out.values) v += half;
  out.shifted = true;
  return out;
}

ParameterValues parity_parameters(const ParameterValues& t, int degree) {
  return degree % 2 == 0 ? shift_parameters(t) : t;
}

KnotVectord averaging_knots_open(const ParameterValues& t, int degree) {
  if (degree < 1) fail(ErrorKind::invalid_input, "degree must be at least 1");
  const Index n = t.last();
  if (n < degree) fail(ErrorKind::invalid_input, "too few points for the requested degree");
  DomainKnotsd domain{{0.0}};
  for (Index i = degree + 1; i <= n; ++i) {
    double sum = 0.0;
    for (Index k = i - degree; k <= i - 1; ++k) sum += t[k];
    domain.values.push_back(sum / degree);
  }
  domain.values.push_back(1.0);
  return clamped_knot_vector(domain, degree);
}

ClosedKnots closed_knots(const ParameterValues& t, ClosedKnotMethod method, int degree) {
  require_unshifted_closed(t);
  const Index n = t.last();
  if (n < degree) fail(ErrorKind::invalid_input, "too few points for the requested degree");
  auto at = [&](Index i) { return i > n ? 1.0 : t[i]; };  // t_{n+1} = 1

  ClosedKnots out{{{0.0}}, t};
  auto& u = out.domain.values;
  switch (method) {
    case ClosedKnotMethod::natural:
      for (Index i = 1; i <= n; ++i) u.push_back(t[i]);
      break;
    case ClosedKnotMethod::averaging:
      for (Index i = 1; i <= n; ++i) u.push_back((at(i - 1) + at(i) + at(i + 1)) / 3.0);
      break;
    case ClosedKnotMethod::shifting: {
      // d_i = t_{i+1} - t_i with t_{n+1} = 1; the recurrence is carried through i = n.
      auto d = [&](Index i) { return at(i + 1) - at(i); };
      double prev = 0.0;
      for (Index i = 1; i <= n; ++i) {
        prev += i == 1 ? 0.5 * (d(n) + d(0)) : 0.5 * (d(i - 2) + d(i - 1));
        u.push_back(prev);
      }
      out.params = shift_parameters(t);
      break;
    }
  }
  u.push_back(1.0);
  validate_domain(out.domain);
  return out;
}

AnchorVectors anchor_vectors(const ParameterValues& t, int degree) {
  require_unshifted_closed(t);
  const Index n = t.last();
  const double half = 0.5 * wrap_gap(t);
  auto at = [&](Index i) { return i > n ? 1.0 : t[i]; };
  AnchorVectors out{{{0.0}}, {}, degree};
  const bool odd = degree % 2 == 1;
  for (Index i = 1; i <= n; ++i)
    out.anchors.values.push_back(odd ? t[i] : half + 0.5 * (t[i - 1] + t[i]));
  out.anchors.values.push_back(1.0);
  for (Index i = 0; i <= n; ++i) out.bounds.push_back(odd ? 0.5 * (at(i) + at(i + 1)) : half + t[i]);
  return out;
}

std::vector<Bracket> interpolation_brackets(const ParameterValues& t, int degree) {
  require_parity(t, degree);
  const Index n = t.last();
  std::vector<Bracket> out;
  out.reserve(static_cast<std::size_t>(n));
  if (degree % 2 == 1) {
    auto at = [&](Index i) { return i > n ? 1.0 : t[i]; };
    for (Index i = 1; i <= n; ++i) out.emplace_back(0.5 * (at(i - 1) + at(i)), 0.5 * (at(i) + at(i + 1)));
  } else {
    for (Index i = 1; i <= n; ++i) out.emplace_back(t[i - 1], t[i]);
  }
  return out;
}

bool strictly_inside(double knot, const Bracket& bracket) {
  const double tol = knot_tolerance<double>();
  return knot > bracket.first + tol && knot < bracket.second - tol;
}

bool check_conjecture1(const ParameterValues& t, const DomainKnotsd& domain, int degree) {
  const auto brackets = interpolation_brackets(t, degree);
  if (domain.size() != t.size() + 1)
    fail(ErrorKind::invalid_input, "domain knots must have one more entry than the parameters");
  if (domain.values.front() != 0.0 || domain.values.back() != 1.0) return false;
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    if (!strictly_inside(domain.values[i + 1], brackets[i])) return false;
  }
  return true;
}

Conjecture2Result check_conjecture2(const ParameterValues& t, const DomainKnotsd& domain, int degree) {
  const auto brackets = interpolation_brackets(t, degree);
  if (domain.size() < t.size() + 1)
    fail(ErrorKind::invalid_input, "domain knots must have at least one more entry than the parameters");
  if (domain.values.front() != 0.0 || domain.values.back() != 1.0) return {};

  // Brackets are disjoint and increasing, so the earliest knot inside each one
  // yields a witness whenever any exists.
  DomainKnotsd witness{{0.0}};
  const Index last_interior = domain.last_interior();
  Index k = 1;
  for (const auto& bracket : brackets) {
    while (k <= last_interior && !(domain[k] > bracket.first + knot_tolerance<double>())) ++k;
    if (k > last_interior || !strictly_inside(domain[k], bracket)) return {};
    witness.values.push_back(domain[k]);
    ++k;
  }
  witness.values.push_back(1.0);
  return {true, std::move(witness)};
}

}  // namespace closedloft
