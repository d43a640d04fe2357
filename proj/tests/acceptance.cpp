// One line per acceptance criterion; exits nonzero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>

#include "closedloft/io.hpp"
#include "closedloft/lab.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/run.hpp"

using namespace closedloft;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* title, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %d: %s (%s; %.1fs)\n", v.pass ? "PASS" : "FAIL", number, title, v.detail.c_str(), secs);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int worker_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

double diag_of(const ContourRows& rows) {
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(1e300), hi = -lo;
  for (const auto& r : rows.rows) {
    lo = lo.cwiseMin(r.colwise().minCoeff().transpose());
    hi = hi.cwiseMax(r.colwise().maxCoeff().transpose());
  }
  return (hi - lo).norm();
}

double relative_gap(const Eigen::RowVector3d& a, const Eigen::RowVector3d& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1.0});
}

ParameterValues random_params(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> gap(0.05, 1.0);
  std::vector<double> g(static_cast<std::size_t>(n + 1));
  double total = 0.0;
  for (double& x : g) total += (x = gap(rng));
  ParameterValues t{{0.0}, true, false, 1.0};
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) t.values.push_back((acc += g[static_cast<std::size_t>(i)]) / total);
  return t;
}

DomainKnotsd random_domain(std::mt19937_64& rng, Index interior) {
  std::uniform_real_distribution<double> U(0.02, 0.98);
  DomainKnotsd d{{0.0, 1.0}};
  while (d.last_interior() < interior) {
    const double x = U(rng);
    auto it = std::lower_bound(d.values.begin(), d.values.end(), x);
    if (*it - x < 1e-3 || x - *std::prev(it) < 1e-3) continue;
    d.values.insert(it, x);
  }
  return d;
}

Verdict conjecture1() {
  TrialConfig cfg;
  cfg.degrees = {2, 3, 4, 5};
  cfg.n_min = 6;
  cfg.n_max = 40;
  cfg.trials = 10000;
  cfg.seed = 20240601;
  cfg.knot_law = KnotLaw::inside;
  cfg.threads = worker_threads();
  const auto r = run_conjecture1_trials(cfg);
  const bool ok = r.counterexamples == 0 && r.condition_true == static_cast<Index>(r.records.size()) &&
                  r.records.size() == 40000 && r.min_sigma_ratio > cfg.rank_tolerance;
  return {ok, std::to_string(r.records.size()) + " trials, " + std::to_string(r.counterexamples) +
                  " counterexamples, min sigma ratio " + fmt("%.3g", r.min_sigma_ratio)};
}

Verdict conjecture2() {
  TrialConfig cfg;
  cfg.degrees = {2, 3, 4, 5};
  cfg.n_min = 4;
  cfg.n_max = 20;
  cfg.extra_min = 1;
  cfg.extra_max = 10;
  cfg.trials = 1250;
  cfg.seed = 20240602;
  cfg.knot_law = KnotLaw::mixed;
  cfg.threads = worker_threads();
  const auto r = run_conjecture2_trials(cfg);
  Index small = 0;
  for (const auto& rec : r.records) small += rec.n <= exhaustive_limit;
  const bool ok = r.records.size() == 5000 && r.counterexamples == 0 && r.exhaustive_disagreements == 0 &&
                  r.exhaustive_checked == small && small > 0;
  return {ok, std::to_string(r.records.size()) + " trials, " + std::to_string(r.condition_true) +
                  " condition-true, " + std::to_string(r.counterexamples) + " counterexamples, " +
                  std::to_string(r.exhaustive_checked) + " exhaustive checks, " +
                  std::to_string(r.exhaustive_disagreements) + " disagreements"};
}

Verdict closed_exactness() {
  struct Case {
    const char* name;
    Points pts;
    ClosedKnotMethod method;
    int p;
  };
  const std::vector<Case> cases{{"circle-16", fixture::circle(16), ClosedKnotMethod::natural, 3},
                                {"ellipse-12", fixture::ellipse(12, 2.0, 1.0), ClosedKnotMethod::shifting, 4},
                                {"square-4", fixture::unit_square(), ClosedKnotMethod::natural, 1},
                                {"star-20", fixture::star(20), ClosedKnotMethod::natural, 5}};
  double worst_res = 0.0, worst_seam = 0.0, worst_close = 0.0;
  bool ok = true;
  for (const auto& c : cases) {
    const double diag = bbox_diagonal(c.pts);
    const auto ck = closed_knots(closed_parameters(c.pts), c.method, c.p);
    const auto r = interpolate_closed_square({c.pts, ck.params, ck.domain, c.p});
    const double res = r.max_residual / diag;
    const double close = (eval_curve(r.curve, 0.0) - eval_curve(r.curve, 1.0)).norm() / diag;
    double seam = 0.0;
    if (c.p >= 2) {
      const auto a = eval_curve_derivatives(r.curve, 0.0, c.p - 1);
      const auto b = eval_curve_derivatives(r.curve, 1.0, c.p - 1);
      for (Index k = 0; k < a.rows(); ++k) seam = std::max(seam, relative_gap(a.row(k), b.row(k)));
    }
    ok = ok && res <= 1e-8 && seam <= 1e-8 && close <= 1e-12;
    worst_res = std::max(worst_res, res);
    worst_seam = std::max(worst_seam, seam);
    worst_close = std::max(worst_close, close);
  }
  return {ok, "relative residual " + fmt("%.2e", worst_res) + ", seam " + fmt("%.2e", worst_seam) + ", closure " +
                  fmt("%.2e", worst_close)};
}

Verdict clamping_invariance() {
  std::mt19937_64 rng(404);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + trial % 4;
    const Index nhat = p + 2 + trial % 15;
    const auto kv = cyclic_knot_vector(random_domain(rng, nhat), p);
    Points distinct(nhat + 1, 3);
    for (Index i = 0; i < distinct.size(); ++i) distinct(i) = N(rng);
    Points expanded(kv.basis_count(), 3);
    for (Index j = 0; j < expanded.rows(); ++j) expanded.row(j) = distinct.row(j % distinct.rows());
    const auto c = closed_from_expanded(kv, expanded);
    const auto clamped = clamp_closed_curve(c);
    const double diag = bbox_diagonal(distinct);
    for (int k = 0; k < 200; ++k) {
      const double u = k == 199 ? 1.0 : U(rng);
      worst = std::max(worst, (eval_curve(c, u) - eval_curve(clamped, u)).norm() / diag);
    }
  }
  return {worst <= 1e-12, "max deviation " + fmt("%.2e", worst) + " of the diagonal over 100 curves"};
}

Verdict lofting_exactness() {
  const auto rows = fixture::tube();
  const double diag = diag_of(rows);
  double worst_res = 0.0, worst_seam = 0.0;
  bool ok = true;
  for (int q = 2; q <= 5; ++q) {
    LoftOptions opt;
    opt.degree_u = 3;
    opt.degree_v = q;
    for (bool park : {false, true}) {
      const auto r = park ? loft_closed_park(rows, opt) : loft_closed_piegl(rows, opt);
      worst_res = std::max(worst_res, r.max_residual / diag);
      for (int k = 0; k < 20; ++k) {
        const double u = k / 19.0;
        for (int d = 0; d < q; ++d) {
          const Eigen::RowVector3d a = eval_surface_derivative(r.surface, u, 0.0, 0, d).transpose();
          const Eigen::RowVector3d b = eval_surface_derivative(r.surface, u, 1.0, 0, d).transpose();
          worst_seam = std::max(worst_seam, relative_gap(a, b));
        }
      }
    }
  }
  ok = worst_res <= 1e-6 && worst_seam <= 1e-6;
  return {ok, "relative residual " + fmt("%.2e", worst_res) + ", v-seam " + fmt("%.2e", worst_seam)};
}

Verdict per_monotonicity() {
  const std::vector<double> pers{1.0, 0.75, 0.5, 0.25, 0.0};
  std::string detail;
  bool ok = true;
  for (const auto& [name, rows] : {std::pair{"tube", fixture::tube()}, std::pair{"noisy", fixture::noisy_tube()}}) {
    const auto aligned = align_contours(rows);
    const auto trad = traditional_common_knots(aligned, 3);
    const Index trad_count = trad.size() - 2 * (trad.degree + 1);
    for (bool park : {false, true}) {
      std::vector<Index> counts;
      for (double per : pers) {
        LoftOptions opt;
        opt.per = per;
        const auto r = park ? loft_closed_park(aligned, opt) : loft_closed_piegl(aligned, opt);
        counts.push_back(r.interior_knot_count());
      }
      for (std::size_t k = 1; k < counts.size(); ++k) ok = ok && counts[k - 1] <= counts[k];
      ok = ok && counts.back() == trad_count;
      detail += std::string(detail.empty() ? "" : "; ") + name + (park ? "/park" : "/piegl");
      for (Index c : counts) detail += " " + std::to_string(c);
      detail += " (traditional " + std::to_string(trad_count) + ")";
    }
  }
  return {ok, detail};
}

Verdict near_parity() {
  bool ok = true;
  std::string detail;
  for (const auto& [name, rows] : {std::pair{"tube", fixture::tube()}, std::pair{"noisy", fixture::noisy_tube()}}) {
    const auto a = loft_closed_piegl(rows, LoftOptions{});
    const auto b = loft_closed_park(rows, LoftOptions{});
    const double ca = static_cast<double>(a.net_cols()), cb = static_cast<double>(b.net_cols());
    ok = ok && std::abs(ca - cb) <= 0.05 * std::max(ca, cb);
    detail += std::string(name) + " " + std::to_string(a.net_rows()) + "x" + std::to_string(a.net_cols()) + " vs " +
              std::to_string(b.net_rows()) + "x" + std::to_string(b.net_cols()) + "; ";
  }
  const auto eq = fixture::equal_rows();
  const auto a = loft_closed_piegl(eq, LoftOptions{});
  const auto b = loft_closed_park(eq, LoftOptions{});
  double gap = 1e300;
  if (a.surface.net.rows() == b.surface.net.rows()) gap = (a.surface.net - b.surface.net).cwiseAbs().maxCoeff();
  ok = ok && gap <= 1e-8;
  return {ok, detail + "equal rows max control difference " + fmt("%.2e", gap)};
}

Verdict energy_optimality() {
  std::mt19937_64 rng(808);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst_drop = 0.0, worst_constraint = 0.0;
  Index problems = 0;
  while (problems < 50) {
    const int p = 2 + static_cast<int>(problems % 4);
    const Index n = p + 2 + static_cast<Index>(problems % 9);
    const auto tp = parity_parameters(random_params(rng, n), p);
    DomainKnotsd d{{0.0}};
    for (const auto& b : interpolation_brackets(tp, p)) d.values.push_back(b.first + (b.second - b.first) * (0.1 + 0.8 * U(rng)));
    d.values.push_back(1.0);
    const Index extra = 1 + static_cast<Index>(problems % 6);
    for (Index k = 0; k < extra;) {
      const double x = U(rng);
      auto it = std::lower_bound(d.values.begin(), d.values.end(), x);
      if (it == d.values.begin() || *it - x < 1e-4 || x - *std::prev(it) < 1e-4) continue;
      d.values.insert(it, x);
      ++k;
    }
    Points pts(n + 1, 3);
    for (Index i = 0; i < pts.size(); ++i) pts(i) = N(rng);
    const auto r = interpolate_closed_energy({pts, tp, d, p});
    const auto kv = cyclic_knot_vector(d, p);
    const auto sys = assemble_closed_system(tp, kv, d.last_interior());
    const MatrixXd k = stiffness_matrix(kv);
    const MatrixXd x = expanded_controls(r.curve);
    MatrixXd rhs = MatrixXd::Zero(sys.matrix.rows(), 3);
    rhs.topRows(n + 1) = pts;
    worst_constraint = std::max(worst_constraint, (sys.matrix * x - rhs).cwiseAbs().maxCoeff() / bbox_diagonal(pts));
    const double e0 = (x.transpose() * k * x).trace();
    const MatrixXd null = Eigen::FullPivLU<MatrixXd>(sys.matrix).kernel();
    for (int trial = 0; trial < 100; ++trial) {
      MatrixXd coef(null.cols(), 3);
      for (Index i = 0; i < coef.size(); ++i) coef(i) = N(rng);
      const MatrixXd y = x + null * coef * 0.1;
      worst_drop = std::max(worst_drop, e0 - (y.transpose() * k * y).trace());
    }
    ++problems;
  }
  return {worst_drop <= 1e-10 && worst_constraint <= 1e-8,
          "largest energy drop " + fmt("%.2e", worst_drop) + ", constraint residual " + fmt("%.2e", worst_constraint)};
}

Verdict stiffness_oracle() {
  std::mt19937_64 rng(909);
  double worst = 0.0;
  bool symmetric = true, banded = true;
  for (int trial = 0; trial < 8; ++trial) {
    const int p = 2 + trial % 4;
    const auto d = random_domain(rng, p + 2 + trial % 3);
    for (bool cyclic : {false, true}) {
      const auto kv = cyclic ? cyclic_knot_vector(d, p) : clamped_knot_vector(d, p);
      const MatrixXd k = stiffness_matrix(kv, 1.0, 0.2);
      const MatrixXd o = oracle::stiffness(kv.knots, p, 1.0, 0.2, 0.0, 1.0);
      symmetric = symmetric && k == k.transpose();
      for (Index i = 0; i < k.rows(); ++i)
        for (Index j = 0; j < k.cols(); ++j) {
          if (std::abs(i - j) > p) banded = banded && k(i, j) == 0.0;
          worst = std::max(worst, std::abs(k(i, j) - o(i, j)) / std::max(std::abs(o(i, j)), 1e-4));
        }
    }
  }
  return {worst <= 1e-8 && symmetric && banded,
          "max relative error " + fmt("%.2e", worst) + (symmetric ? ", symmetric" : ", asymmetric") +
              (banded ? ", band 2p+1" : ", entries outside the band")};
}

Verdict determinism() {
  run::Scratch s("accept");
  ContourFile f;
  f.rows = fixture::tube();
  const auto input = s.write("tube.json", contours_to_json(f));
  bool ok = true;
  std::string detail;
  const std::string verify = "verify-conjectures --which both --trials 300 --seed 77 --stress --threads 2";
  const auto a = run::cli(s, verify), b = run::cli(s, verify);
  ok = ok && a.code == 0 && b.code == 0 && !a.out.empty() && a.out == b.out;
  detail += "verify " + std::to_string(a.out.size()) + " bytes";
  for (const char* method : {"piegl", "park"}) {
    const std::string base = std::string("loft --input '") + input + "' --method " + method;
    const auto r1 = run::cli(s, base + " --output '" + s.path("a.json") + "' --obj '" + s.path("a.obj") + "'");
    const auto r2 = run::cli(s, base + " --output '" + s.path("b.json") + "' --obj '" + s.path("b.obj") + "'");
    const bool same = r1.code == 0 && r2.code == 0 && r1.out == r2.out &&
                      run::slurp(s.path("a.json")) == run::slurp(s.path("b.json")) &&
                      run::slurp(s.path("a.obj")) == run::slurp(s.path("b.obj"));
    ok = ok && same;
    detail += std::string(", loft ") + method + (same ? " identical" : " differs");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  criterion(1, "square-system rank with knots inside the brackets", conjecture1);
  criterion(2, "oversized knot sets with a witness subset", conjecture2);
  criterion(3, "closed-curve interpolation exactness", closed_exactness);
  criterion(4, "clamping leaves the curve unchanged", clamping_invariance);
  criterion(5, "lofted surfaces interpolate and close smoothly", lofting_exactness);
  criterion(6, "interior knot count grows as per shrinks", per_monotonicity);
  criterion(7, "both lofting paths give comparable nets", near_parity);
  criterion(8, "energy solution beats feasible perturbations", energy_optimality);
  criterion(9, "stiffness matrices match quadrature", stiffness_oracle);
  criterion(10, "command line output is reproducible", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
