// closedloft command-line front end.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure,
// 3 counterexample found, 64 bad flags.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "closedloft/io.hpp"
#include "closedloft/lab.hpp"
#include "closedloft/version.hpp"

namespace cl = closedloft;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_numerical = 2;
constexpr int exit_counterexample = 3;
constexpr int exit_usage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(const cl::Error& e) {
  return e.kind() == cl::ErrorKind::singular ? exit_numerical : exit_invalid;
}

std::string fmt(double v, const char* f = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    cl::write_file(path, text);
}

std::pair<int, int> parse_range(const std::string& s, const char* flag) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects A:B");
  }
}

std::vector<int> parse_list(const std::string& s, const char* flag) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + " expects a comma-separated list of integers");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " is empty");
  return out;
}

// ---- loft

struct LoftFlags {
  std::string input, method = "piegl", align = "auto", output, obj;
  int degree_u = 3, degree_v = 3;
  double per = 1.0, alpha = cl::default_stretch_weight, beta = cl::default_bend_weight, exponent = 1.0;
  int samples_u = 32, samples_v = 64;
  std::uint64_t seed = 0;
};

int run_loft(const LoftFlags& f) {
  if (!(f.per >= 0.0 && f.per <= 1.0)) throw UsageError("per must lie in [0,1]");
  if (f.samples_u < 2 || f.samples_v < 2) throw UsageError("--samples-u and --samples-v must be at least 2");
  const std::string raw = cl::read_file(f.input);
  const auto file = cl::parse_contours(raw, f.input.ends_with(".csv") || f.input.ends_with(".txt")
                                                ? cl::ContourFormat::blocks
                                                : cl::ContourFormat::automatic);
  cl::ContourRows rows = cl::hinted_rows(file);
  if (f.align == "none") rows.aligned = true;

  cl::LoftOptions opt;
  opt.degree_u = f.degree_u;
  opt.degree_v = f.degree_v;
  opt.per = f.per;
  opt.alpha = f.alpha;
  opt.beta = f.beta;
  opt.exponent = f.exponent;

  cl::LoftResult r;
  if (f.method == "piegl")
    r = cl::loft_closed_piegl(rows, opt);
  else if (f.method == "park")
    r = cl::loft_closed_park(rows, opt);
  else
    r = cl::loft_open(rows, opt);

  cl::SurfaceFile out{r.surface, {f.method, f.per, f.alpha, f.beta, cl::tool_version, cl::digest_string(raw)}};
  cl::write_file(f.output, cl::serialize_surface(out));
  if (!f.obj.empty()) cl::write_file(f.obj, cl::export_obj(r.surface, f.samples_u, f.samples_v));
  std::cout << "method " << f.method << ", control net " << r.net_rows() << " x " << r.net_cols()
            << ", interior knots " << r.interior_knot_count() << ", max residual " << fmt(r.max_residual) << '\n';
  return exit_ok;
}

// ---- interp-curve

struct InterpFlags {
  std::string input, knot_method = "natural", input_knots, output;
  bool closed = false;
  int degree = 3;
  double per = 1.0, exponent = 1.0;
};

int run_interp(const InterpFlags& f) {
  if (!(f.per >= 0.0 && f.per <= 1.0)) throw UsageError("per must lie in [0,1]");
  if (f.knot_method == "input" && f.input_knots.empty()) throw UsageError("--knot-method input needs --input-knots");
  const auto file = cl::read_contours(f.input);
  if (file.rows.size() != 1)
    throw cl::Error(cl::ErrorKind::invalid_input, "interp-curve takes exactly one row, got " +
                                                      std::to_string(file.rows.size()), "validate");
  const cl::Points& pts = file.rows.rows.front();
  const int p = f.degree;
  cl::CurveFile out;
  out.knot_method = f.knot_method;

  if (!f.closed) {
    if (f.knot_method != "averaging" && f.knot_method != "natural")
      throw cl::Error(cl::ErrorKind::invalid_input, "open curves support the averaging knot method only", "knots");
    out.knot_method = "averaging";
    const auto t = cl::open_parameters(pts, f.exponent);
    auto r = cl::interpolate_open(pts, t, cl::averaging_knots_open(t, p));
    out.curve = r.curve;
    out.params = r.params;
    out.max_residual = r.max_residual;
    out.sigma_ratio = r.diagnostics.sigma_ratio();
  } else {
    const auto t = cl::closed_parameters(pts, f.exponent);
    cl::InterpolationResult r;
    if (f.knot_method == "input") {
      const auto kv = cl::parse_knot_vector(cl::read_file(f.input_knots), p);
      auto in = cl::interpolate_points_by_input_knots(pts, t, kv, p, f.per);
      r = std::move(in.closed);
      out.domain = in.domain;
      out.clamped = in.clamped;
    } else {
      cl::ClosedKnotMethod method = cl::ClosedKnotMethod::natural;
      if (f.knot_method == "averaging") method = cl::ClosedKnotMethod::averaging;
      if (f.knot_method == "shifting") method = cl::ClosedKnotMethod::shifting;
      if (method == cl::ClosedKnotMethod::natural && p % 2 == 0)
        std::cerr << "warning: even degree with natural knots tends to give an ill-conditioned system matrix; "
                     "consider --knot-method shifting\n";
      const auto ck = cl::closed_knots(t, method, p);
      out.domain = ck.domain;
      r = cl::interpolate_closed_square({pts, ck.params, ck.domain, p}, cl::ConditionPolicy::warn);
    }
    out.curve = r.curve;
    out.params = r.params;
    out.max_residual = r.max_residual;
    out.condition_satisfied = r.condition_satisfied;
    out.sigma_ratio = r.diagnostics.sigma_ratio();
    std::cerr << "interpolation condition: " << (r.condition_satisfied ? "satisfied" : "violated") << '\n';
  }
  emit(f.output, cl::serialize_curve(out));
  std::cerr << (f.closed ? "closed" : "open") << " curve, degree " << p << ", " << out.curve.controls.rows()
            << " controls, max residual " << fmt(out.max_residual) << '\n';
  return exit_ok;
}

// ---- verify-conjectures

struct VerifyFlags {
  std::string which = "both", degrees = "2,3,4,5", n_range, nhat_extra = "1:10", output;
  std::string param_law = "uniform", knot_law;
  int trials = 1000, threads = 1;
  std::uint64_t seed = 42;
  double rank_tol = cl::default_rank_tolerance;
  bool stress = false, summary_only = false;
};

cl::KnotLaw knot_law(const std::string& s) {
  if (s == "inside") return cl::KnotLaw::inside;
  if (s == "boundary") return cl::KnotLaw::boundary_stress;
  if (s == "violating") return cl::KnotLaw::violating;
  return cl::KnotLaw::mixed;
}

int run_verify(const VerifyFlags& f) {
  if (f.trials < 1) throw UsageError("--trials must be at least 1");
  if (f.threads < 1) throw UsageError("--threads must be at least 1");
  if (!(f.rank_tol > 0.0 && f.rank_tol < 1.0)) throw UsageError("--rank-tol must lie in (0,1)");
  cl::TrialConfig base;
  base.degrees = parse_list(f.degrees, "--degrees");
  for (int p : base.degrees)
    if (p < 1 || p > 12) throw UsageError("--degrees entries must lie in [1,12]");
  base.trials = f.trials;
  base.seed = f.seed;
  base.rank_tolerance = f.rank_tol;
  base.threads = f.threads;
  base.param_law = f.param_law == "lognormal" ? cl::ParamLaw::lognormal_gap : cl::ParamLaw::uniform_gap;
  auto ranges = [&](cl::TrialConfig& cfg, const char* default_n) {
    const auto [lo, hi] = parse_range(f.n_range.empty() ? default_n : f.n_range, "--n-range");
    if (lo < 1 || hi < lo) throw UsageError("--n-range must satisfy 1 <= A <= B");
    cfg.n_min = lo;
    cfg.n_max = hi;
  };

  std::string text;
  bool counterexample = false;
  auto add = [&](const cl::TrialReport& r) {
    if (!text.empty()) text += '\n';
    text += cl::format_report(r, !f.summary_only);
    counterexample = counterexample || r.counterexamples > 0;
  };
  if (f.which == "1" || f.which == "both") {
    auto cfg = base;
    ranges(cfg, "6:40");
    cfg.knot_law = f.knot_law.empty() ? cl::KnotLaw::inside : knot_law(f.knot_law);
    add(cl::run_conjecture1_trials(cfg));
  }
  if (f.which == "2" || f.which == "both") {
    auto cfg = base;
    ranges(cfg, "4:20");
    const auto [lo, hi] = parse_range(f.nhat_extra, "--nhat-extra");
    if (lo < 0 || hi < lo) throw UsageError("--nhat-extra must satisfy 0 <= A <= B");
    cfg.extra_min = lo;
    cfg.extra_max = hi;
    cfg.knot_law = f.knot_law.empty() ? cl::KnotLaw::mixed : knot_law(f.knot_law);
    add(cl::run_conjecture2_trials(cfg));
  }
  if (f.stress) {
    auto cfg = base;
    ranges(cfg, "6:40");
    std::vector<double> ladder{0.5};
    for (int k = 1; k <= 12; ++k) ladder.push_back(std::pow(10.0, -k));
    ladder.push_back(0.0);
    add(cl::boundary_stress(cfg, ladder));
  }
  emit(f.output, text);
  return counterexample ? exit_counterexample : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed B-spline interpolation, lofting of closed contours, and conjecture checks", cl::tool_name};
  app.set_version_flag("--version", std::string(cl::tool_name) + " " + cl::tool_version);
  app.require_subcommand(1);

  LoftFlags lf;
  auto* loft = app.add_subcommand("loft", "Loft a closed surface through contour rows");
  loft->add_option("--input", lf.input, "Contour file (JSON or blank-line separated x y z blocks)")->required();
  loft->add_option("--method", lf.method, "piegl, park, or open")
      ->check(CLI::IsMember({"piegl", "park", "open"}))
      ->capture_default_str();
  loft->add_option("--degree-u", lf.degree_u, "Degree across rows")->check(CLI::Range(1, 12))->capture_default_str();
  loft->add_option("--degree-v", lf.degree_v, "Degree along rows")->check(CLI::Range(1, 12))->capture_default_str();
  loft->add_option("--per", lf.per, "Share of each knot bracket usable for shared knots, in [0,1]")
      ->capture_default_str();
  loft->add_option("--align", lf.align, "auto or none")->check(CLI::IsMember({"auto", "none"}))->capture_default_str();
  loft->add_option("--alpha", lf.alpha, "Stretch weight (park)")->capture_default_str();
  loft->add_option("--beta", lf.beta, "Bend weight (park)")->capture_default_str();
  loft->add_option("--exponent", lf.exponent, "Chord-length exponent (1 chord, 0.5 centripetal)")
      ->capture_default_str();
  loft->add_option("--output", lf.output, "Surface file to write")->required();
  loft->add_option("--obj", lf.obj, "Also write a quad mesh");
  loft->add_option("--samples-u", lf.samples_u, "Mesh samples across rows")->capture_default_str();
  loft->add_option("--samples-v", lf.samples_v, "Mesh samples along rows")->capture_default_str();
  loft->add_option("--seed", lf.seed, "Reserved");

  InterpFlags inf;
  auto* interp = app.add_subcommand("interp-curve", "Interpolate one row of points");
  interp->add_option("--input", inf.input, "Contour file with a single row")->required();
  interp->add_flag("--closed", inf.closed, "Closed (periodic) curve");
  interp->add_option("--degree", inf.degree, "Curve degree")->check(CLI::Range(1, 12))->capture_default_str();
  interp->add_option("--knot-method", inf.knot_method, "natural, averaging, shifting, or input")
      ->check(CLI::IsMember({"natural", "averaging", "shifting", "input"}))
      ->capture_default_str();
  interp->add_option("--input-knots", inf.input_knots, "Clamped knot vector to reuse (knot method input)");
  interp->add_option("--per", inf.per, "Share of each knot bracket usable for input knots, in [0,1]")
      ->capture_default_str();
  interp->add_option("--exponent", inf.exponent, "Chord-length exponent")->capture_default_str();
  interp->add_option("--output", inf.output, "Curve file to write (stdout when absent)");

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify-conjectures", "Randomized checks of the closed interpolation conditions");
  verify->add_option("--which", vf.which, "1, 2, or both")->check(CLI::IsMember({"1", "2", "both"}))
      ->capture_default_str();
  verify->add_option("--trials", vf.trials, "Trials per degree")->capture_default_str();
  verify->add_option("--seed", vf.seed, "Random seed")->capture_default_str();
  verify->add_option("--degrees", vf.degrees, "Comma-separated degrees")->capture_default_str();
  verify->add_option("--n-range", vf.n_range, "Range A:B of n (default 6:40, or 4:20 for the oversized-domain check)");
  verify->add_option("--nhat-extra", vf.nhat_extra, "Range A:B of extra domain knots")->capture_default_str();
  verify->add_option("--rank-tol", vf.rank_tol, "Relative singular-value threshold")->capture_default_str();
  verify->add_option("--param-law", vf.param_law, "uniform or lognormal parameter gaps")
      ->check(CLI::IsMember({"uniform", "lognormal"}))
      ->capture_default_str();
  verify->add_option("--knot-law", vf.knot_law, "inside, boundary, violating, or mixed")
      ->check(CLI::IsMember({"inside", "boundary", "violating", "mixed"}));
  verify->add_flag("--stress", vf.stress, "Also run the bracket-boundary ladder");
  verify->add_flag("--summary-only", vf.summary_only, "Omit per-trial records");
  verify->add_option("--threads", vf.threads, "Worker threads")->capture_default_str();
  verify->add_option("--output", vf.output, "Report file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (loft->parsed()) return run_loft(lf);
    if (interp->parsed()) return run_interp(inf);
    return run_verify(vf);
  } catch (const UsageError& e) {
    std::cerr << e.what() << '\n';
    return exit_usage;
  } catch (const cl::Error& e) {
    std::cerr << "error (" << cl::to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e);
  }
}
