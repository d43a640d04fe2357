#ifndef CLOSEDLOFT_KNOT_VECTOR_HPP
#define CLOSEDLOFT_KNOT_VECTOR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "closedloft/error.hpp"
#include "closedloft/types.hpp"

namespace closedloft {

enum class KnotStyle { clamped, cyclic };

/// Two knots closer than this (on the normalized [0,1] domain) are the same knot.
template <typename Scalar>
constexpr Scalar knot_tolerance() {
  return Scalar(1e-10);
}

/// Knot sequence with its degree. Vector index k holds u_{k-p} for cyclic
/// vectors and u_k for clamped ones; in both cases the curve domain is
/// [knots[p], knots[size - p - 1]].
template <typename Scalar>
struct KnotVector {
  std::vector<Scalar> knots;
  int degree = 1;
  KnotStyle style = KnotStyle::clamped;

  Index size() const { return static_cast<Index>(knots.size()); }
  Index basis_count() const { return size() - degree - 1; }
  Scalar domain_begin() const { return knots[degree]; }
  Scalar domain_end() const { return knots[size() - degree - 1]; }
  Scalar operator[](Index k) const { return knots[static_cast<std::size_t>(k)]; }

  /// Knots from the start to the end of the curve domain, inclusive.
  std::vector<Scalar> domain_knots() const {
    return {knots.begin() + degree, knots.end() - degree};
  }

  bool operator==(const KnotVector&) const = default;
};

/// Domain knots u_0 = 0 < u_1 < ... < u_{n+1} = 1.
template <typename Scalar>
struct DomainKnots {
  std::vector<Scalar> values;

  /// Index of the last interior knot (the n of u_{n+1}).
  Index last_interior() const { return static_cast<Index>(values.size()) - 2; }
  Index size() const { return static_cast<Index>(values.size()); }
  Scalar operator[](Index k) const { return values[static_cast<std::size_t>(k)]; }

  bool operator==(const DomainKnots&) const = default;
};

using KnotVectord = KnotVector<double>;
using DomainKnotsd = DomainKnots<double>;

template <typename Scalar>
void validate_domain(const DomainKnots<Scalar>& domain) {
  const auto& u = domain.values;
  if (u.size() < 2) fail(ErrorKind::invalid_input, "domain knots need at least two entries");
  if (u.front() != Scalar(0) || u.back() != Scalar(1))
    fail(ErrorKind::invalid_input, "domain knots must start at 0 and end at 1");
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    if (!(u[k + 1] > u[k])) {
      std::ostringstream msg;
      msg << "domain knots must be strictly increasing (u_" << k + 1 << " <= u_" << k << ")";
      fail(ErrorKind::invalid_input, msg.str());
    }
  }
}

/// Periodic extension of the domain knots by p knots on each side.
template <typename Scalar>
KnotVector<Scalar> cyclic_knot_vector(const DomainKnots<Scalar>& domain, int degree) {
  if (degree < 1) fail(ErrorKind::invalid_input, "degree must be at least 1");
  validate_domain(domain);
  const Index n = domain.last_interior();
  const Index p = degree;
  // u(i) addresses u_i for i in [-p, n + p + 1].
  std::vector<Scalar> knots(static_cast<std::size_t>(n + 2 + 2 * p));
  auto u = [&](Index i) -> Scalar& { return knots[static_cast<std::size_t>(i + p)]; };
  for (Index i = 0; i <= n + 1; ++i) u(i) = domain[i];
  for (Index i = 1; i <= p; ++i) u(-i) = u(-(i - 1)) + u(n - i + 1) - u(n - i + 2);
  for (Index i = 1; i <= p; ++i) u(n + i + 1) = u(n + i) + u(i) - u(i - 1);
  return {std::move(knots), degree, KnotStyle::cyclic};
}

/// p+1 zeros, the interior domain knots, p+1 ones.
template <typename Scalar>
KnotVector<Scalar> clamped_knot_vector(const DomainKnots<Scalar>& domain, int degree) {
  if (degree < 1) fail(ErrorKind::invalid_input, "degree must be at least 1");
  validate_domain(domain);
  std::vector<Scalar> knots(static_cast<std::size_t>(degree), Scalar(0));
  knots.insert(knots.end(), domain.values.begin(), domain.values.end());
  knots.insert(knots.end(), static_cast<std::size_t>(degree), Scalar(1));
  return {std::move(knots), degree, KnotStyle::clamped};
}

template <typename Scalar>
void validate(const KnotVector<Scalar>& kv) {
  const auto& k = kv.knots;
  const int p = kv.degree;
  if (p < 0) fail(ErrorKind::invalid_input, "negative degree");
  if (kv.size() < 2 * p + 2) fail(ErrorKind::invalid_input, "knot vector too short for its degree");
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    if (!std::isfinite(k[i]) || k[i + 1] < k[i])
      fail(ErrorKind::invalid_input, "knot vector must be finite and non-decreasing");
  }
  if (!(kv.domain_end() > kv.domain_begin())) fail(ErrorKind::invalid_input, "empty curve domain");
  if (kv.style == KnotStyle::clamped) {
    for (int i = 1; i <= p; ++i) {
      if (k[static_cast<std::size_t>(i)] != k.front() || k[k.size() - 1 - static_cast<std::size_t>(i)] != k.back())
        fail(ErrorKind::invalid_input, "clamped knot vector needs p+1 equal end knots");
    }
  } else {
    const Index n = kv.size() - 2 * p - 2;
    const Scalar period = kv.domain_end() - kv.domain_begin();
    const Scalar tol = Scalar(1e-12) * std::max(Scalar(1), std::abs(period));
    for (Index i = 0; i < 2 * p; ++i) {
      if (std::abs(kv[i + n + 1] - kv[i] - period) > tol)
        fail(ErrorKind::invalid_input, "cyclic knot vector is not periodic");
    }
  }
}

/// Index s of the span [knots[s], knots[s+1]) containing u; the right end of
/// the domain belongs to the last non-empty span.
template <typename Scalar>
Index find_span(const KnotVector<Scalar>& kv, Scalar u) {
  const Index p = kv.degree;
  const Index last = kv.basis_count() - 1;
  const Scalar lo = kv.domain_begin();
  const Scalar hi = kv.domain_end();
  const Scalar slack = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), hi - lo);
  if (!(u >= lo - slack && u <= hi + slack)) {
    std::ostringstream msg;
    msg << "parameter " << u << " outside curve domain [" << lo << ", " << hi << "]";
    fail(ErrorKind::domain, msg.str());
  }
  if (u >= hi) {
    Index s = last;
    while (s > p && kv[s] == kv[s + 1]) --s;
    return s;
  }
  if (u <= lo) {
    Index s = p;
    while (s < last && kv[s] == kv[s + 1]) ++s;
    return s;
  }
  const auto first = kv.knots.begin() + p;
  const auto end = kv.knots.begin() + last + 1;
  return static_cast<Index>(std::upper_bound(first, end, u) - kv.knots.begin()) - 1;
}

/// Distinct knot values with their multiplicities (values within
/// knot_tolerance share a group; the group keeps its first value).
template <typename Scalar>
std::vector<std::pair<Scalar, int>> knot_groups(const std::vector<Scalar>& knots) {
  std::vector<std::pair<Scalar, int>> groups;
  for (Scalar k : knots) {
    if (!groups.empty() && std::abs(k - groups.back().first) <= knot_tolerance<Scalar>())
      ++groups.back().second;
    else
      groups.emplace_back(k, 1);
  }
  return groups;
}

namespace detail {

template <typename Scalar, typename Combine>
std::vector<std::pair<Scalar, int>> combine_groups(const std::vector<std::pair<Scalar, int>>& a,
                                                   const std::vector<std::pair<Scalar, int>>& b,
                                                   Combine combine) {
  std::vector<std::pair<Scalar, int>> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first - knot_tolerance<Scalar>())) {
      out.emplace_back(a[i].first, combine(a[i].second, 0));
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first - knot_tolerance<Scalar>()) {
      out.emplace_back(b[j].first, combine(0, b[j].second));
      ++j;
    } else {
      out.emplace_back(a[i].first, combine(a[i].second, b[j].second));
      ++i;
      ++j;
    }
  }
  return out;
}

template <typename Scalar>
std::vector<Scalar> expand_groups(const std::vector<std::pair<Scalar, int>>& groups) {
  std::vector<Scalar> out;
  for (const auto& [value, mult] : groups) out.insert(out.end(), static_cast<std::size_t>(std::max(mult, 0)), value);
  return out;
}

}  // namespace detail

/// Union of two clamped knot vectors; each knot keeps the larger of its two
/// multiplicities.
template <typename Scalar>
KnotVector<Scalar> merge_knot_vectors(const KnotVector<Scalar>& a, const KnotVector<Scalar>& b) {
  if (a.style != KnotStyle::clamped || b.style != KnotStyle::clamped)
    fail(ErrorKind::invalid_input, "merge requires clamped knot vectors");
  if (a.degree != b.degree) fail(ErrorKind::invalid_input, "merge requires equal degrees");
  const Scalar tol = knot_tolerance<Scalar>();
  if (std::abs(a.domain_begin() - b.domain_begin()) > tol || std::abs(a.domain_end() - b.domain_end()) > tol)
    fail(ErrorKind::invalid_input, "merge requires identical domains");
  auto groups = detail::combine_groups(knot_groups(a.knots), knot_groups(b.knots),
                                       [](int x, int y) { return std::max(x, y); });
  return {detail::expand_groups(groups), a.degree, KnotStyle::clamped};
}

/// Union of two domain-knot sequences (strictly increasing, tolerance-aware).
template <typename Scalar>
DomainKnots<Scalar> merge_domain_knots(const DomainKnots<Scalar>& a, const DomainKnots<Scalar>& b) {
  auto groups = detail::combine_groups(knot_groups(a.values), knot_groups(b.values),
                                       [](int, int) { return 1; });
  return {detail::expand_groups(groups)};
}

/// Knots of `target` missing from `source` (multiset difference), sorted.
template <typename Scalar>
std::vector<Scalar> knots_to_insert(const KnotVector<Scalar>& source, const KnotVector<Scalar>& target) {
  auto groups = detail::combine_groups(knot_groups(target.knots), knot_groups(source.knots),
                                       [](int t, int s) { return t - s; });
  for (const auto& g : groups) {
    if (g.second < 0) fail(ErrorKind::invalid_input, "target knot vector does not contain the source knots");
  }
  return detail::expand_groups(groups);
}

}  // namespace closedloft

#endif  // CLOSEDLOFT_KNOT_VECTOR_HPP
