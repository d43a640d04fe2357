#include <random>

#include "doctest.h"

#include "closedloft/interp.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace closedloft;

namespace {

InterpolationResult closed_with(const Points& pts, ClosedKnotMethod method, int p) {
  const auto ck = closed_knots(closed_parameters(pts), method, p);
  return interpolate_closed_square({pts, ck.params, ck.domain, p});
}

/// max over k < p of |C^(k)(0) - C^(k)(1)| relative to the derivative size.
double seam_gap(const BSplineCurved& c) {
  const auto a = eval_curve_derivatives(c, 0.0, c.degree() - 1);
  const auto b = eval_curve_derivatives(c, 1.0, c.degree() - 1);
  double worst = 0.0;
  for (Index k = 0; k < a.rows(); ++k)
    worst = std::max(worst, (a.row(k) - b.row(k)).norm() / std::max({a.row(k).norm(), b.row(k).norm(), 1.0}));
  return worst;
}

}  // namespace

TEST_CASE("open interpolation") {
  Points two(2, 3);
  two << 0, 0, 0, 2, 1, 0;
  const auto t2 = open_parameters(two);
  const auto seg = interpolate_open(two, t2, averaging_knots_open(t2, 1));
  CHECK(seg.max_residual == 0.0);

  Points line(5, 3);
  for (Index i = 0; i < 5; ++i) line.row(i) << i * i * 0.1, 2.0 * i * i * 0.1, 0.0;
  const auto tl = open_parameters(line);
  const auto lc = interpolate_open(line, tl, averaging_knots_open(tl, 3));
  for (int k = 0; k <= 50; ++k) {
    const Point3d q = eval_curve(lc.curve, k / 50.0);
    CHECK(std::abs(2.0 * q(0) - q(1)) <= 1e-10);
    CHECK(std::abs(q(2)) <= 1e-12);
  }

  Points sine(9, 3);
  for (Index i = 0; i < 9; ++i) sine.row(i) << i / 8.0 * 3.0, std::sin(i / 8.0 * 3.0), 0.0;
  const auto ts = open_parameters(sine);
  CHECK(interpolate_open(sine, ts, averaging_knots_open(ts, 3)).max_residual < 1e-10);
}

TEST_CASE("closed interpolation with n-hat = n") {
  const auto sq = closed_with(fixture::unit_square(), ClosedKnotMethod::natural, 1);
  CHECK(sq.max_residual <= 1e-15);
  for (Index i = 0; i < 4; ++i) CHECK((sq.curve.controls.row(i) - fixture::unit_square().row(i)).norm() <= 1e-15);

  const auto circle = closed_with(fixture::circle(16), ClosedKnotMethod::natural, 3);
  CHECK(circle.max_residual < 1e-10);
  CHECK(seam_gap(circle.curve) <= 1e-8);
  CHECK(circle.condition_satisfied);

  const auto ellipse = closed_with(fixture::ellipse(12, 2.0, 1.0), ClosedKnotMethod::shifting, 4);
  CHECK(ellipse.max_residual < 1e-10);
  CHECK(seam_gap(ellipse.curve) <= 1e-8);

  const auto star = closed_with(fixture::star(), ClosedKnotMethod::averaging, 5);
  CHECK(star.max_residual < 1e-10);
  CHECK(seam_gap(star.curve) <= 1e-8);

  SUBCASE("too few points") {
    CHECK_THROWS_AS(closed_with(fixture::circle(4), ClosedKnotMethod::natural, 3), Error);
  }
  SUBCASE("violated condition is refused unless asked") {
    const Points pts = fixture::circle(8);
    const auto t = closed_parameters(pts);
    DomainKnotsd bad{{0.0}};
    for (Index i = 1; i < 8; ++i) bad.values.push_back(t[i] + 1.5 * (1.0 / 16));
    bad.values.push_back(1.0);
    try {
      interpolate_closed_square({pts, t, bad, 3});
      FAIL("expected a precondition error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::precondition);
    }
    const auto r = interpolate_closed_square({pts, t, bad, 3}, ConditionPolicy::warn);
    CHECK_FALSE(r.condition_satisfied);
  }
}

TEST_CASE("closed interpolation with extra knots minimizes energy") {
  const Points pts = fixture::circle(8);
  const auto t = closed_parameters(pts);
  const auto nat = closed_knots(t, ClosedKnotMethod::natural, 3);

  // n-hat = n: the square solution
  const auto e_sq = interpolate_closed_energy({pts, nat.params, nat.domain, 3});
  const auto sq = interpolate_closed_square({pts, nat.params, nat.domain, 3});
  CHECK((e_sq.curve.controls - sq.curve.controls).cwiseAbs().maxCoeff() <= 1e-10);

  DomainKnotsd d = nat.domain;
  for (double x : {0.06, 0.31, 0.44, 0.69}) d.values.push_back(x);
  std::sort(d.values.begin(), d.values.end());
  REQUIRE(d.last_interior() == 11);
  const auto r = interpolate_closed_energy({pts, nat.params, d, 3});
  CHECK(r.max_residual < 1e-8);

  const auto kv = cyclic_knot_vector(d, 3);
  const auto sys = assemble_closed_system(nat.params, kv, d.last_interior());
  const MatrixXd k = stiffness_matrix(kv);
  const MatrixXd p = expanded_controls(r.curve);
  const double e0 = (p.transpose() * k * p).trace();
  CHECK(e0 == doctest::Approx(curve_energy(r.curve)).epsilon(1e-12));
  const MatrixXd null = Eigen::FullPivLU<MatrixXd>(sys.matrix).kernel();
  REQUIRE(null.cols() == 4);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> N;
  for (int trial = 0; trial < 100; ++trial) {
    MatrixXd coef(null.cols(), 3);
    for (Index i = 0; i < coef.size(); ++i) coef(i) = N(rng);
    const MatrixXd q = p + null * coef * 0.1;
    CHECK((q.transpose() * k * q).trace() >= e0 - 1e-10);
  }

  Points twice = 2.0 * pts;
  const auto r2 = interpolate_closed_energy({twice, nat.params, d, 3});
  CHECK((r2.curve.controls - 2.0 * r.curve.controls).cwiseAbs().maxCoeff() <= 1e-12);

  // knots without a witness subset are refused
  DomainKnotsd crowded{{0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 1}};
  CHECK_THROWS_AS(interpolate_closed_energy({pts, nat.params, crowded, 3}), Error);
}

TEST_CASE("interpolation reusing input knots") {
  const ParameterValues t{{0, 0.25, 0.5, 0.75}, true, false, 1.0};
  const auto anchors = anchor_vectors(t, 3);
  const auto interval = selection_interval(anchors, 1, 1.0);
  CHECK(interval.first == 0.125);
  CHECK(interval.second == 0.375);
  const auto none = selection_interval(anchors, 1, 0.0);
  CHECK(none.first == 0.25);
  CHECK(none.second == 0.25);

  const KnotVectord input{{0, 0, 0, 0, 0.3, 1, 1, 1, 1}, 3, KnotStyle::clamped};
  const auto chosen = select_input_knots(t, input, 3, 1.0);
  CHECK(chosen == DomainKnotsd{{0, 0.3, 0.5, 0.75, 1}});

  const Points sq = fixture::circle(8);
  const auto res = interpolate_points_by_input_knots(sq, closed_parameters(sq), input, 3, 1.0);
  CHECK(res.domain[2] == 0.3);  // nearest to anchor 0.25, inside (0.1875, 0.3125)
  CHECK(res.closed.max_residual < 1e-12);
  // the updated input contains every input knot
  CHECK(knots_to_insert(input, res.updated_input).size() + input.knots.size() == res.updated_input.knots.size());
  for (int k = 0; k <= 100; ++k)
    CHECK((eval_curve(res.closed.curve, k / 100.0) - eval_curve(res.clamped, k / 100.0)).norm() <= 1e-12);

  // per = 0 falls back to the natural (odd) or shifting (even) knots
  const Points pts = fixture::ellipse(9, 1.5, 1.0);
  const auto tp = closed_parameters(pts);
  for (int p : {2, 3, 4, 5}) {
    const auto r0 = interpolate_points_by_input_knots(pts, tp, clamped_knot_vector(DomainKnotsd{{0, 0.33, 1}}, p), p,
                                                      0.0);
    const auto want = closed_knots(tp, p % 2 ? ClosedKnotMethod::natural : ClosedKnotMethod::shifting, p).domain;
    for (Index i = 0; i < want.size(); ++i) CHECK(std::abs(r0.domain[i] - want[i]) <= 1e-15);
  }
}

TEST_CASE("domain knots chosen from input domain knots") {
  const ParameterValues t{{0, 0.25, 0.5, 0.75}, true, false, 1.0};
  const auto got = build_domain_knots_by_input_knots(t, DomainKnotsd{{0, 0.3, 0.55, 0.9, 1}}, 3, 1.0);
  const std::vector<double> want{0, 0.3, 0.55, 0.75, 1};
  REQUIRE(got.values.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got.values[i] == want[i]);

  const auto anchors = anchor_vectors(t, 3).anchors;
  CHECK(build_domain_knots_by_input_knots(t, anchors, 3, 1.0) == anchors);
  CHECK(build_domain_knots_by_input_knots(t, DomainKnotsd{{0, 0.3, 0.55, 0.9, 1}}, 3, 0.0) == anchors);

  // the result always satisfies the condition
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = 1 + trial % 5;
    const Points pts = fixture::tube_ring(5 + trial % 20, 1.0, 0.0, U(rng));
    const auto tc = closed_parameters(pts);
    DomainKnotsd input{{0.0}};
    std::vector<double> xs(static_cast<std::size_t>(3 + trial % 30));
    for (double& x : xs) x = U(rng);
    std::sort(xs.begin(), xs.end());
    for (double x : xs)
      if (x > input.values.back() + 1e-9 && x < 1 - 1e-9) input.values.push_back(x);
    input.values.push_back(1.0);
    const double per = U(rng);
    const auto d = build_domain_knots_by_input_knots(tc, input, p, per);
    CHECK(d.size() == tc.size() + 1);
    CHECK(check_conjecture1(parity_parameters(tc, p), d, p));
  }
}
