#include "closedloft/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "closedloft/knot_vector.hpp"
#include "closedloft/version.hpp"

namespace closedloft {

const char* const lab_generator_name = "mt19937_64 per trial, seeded with splitmix64(seed + 0x9e3779b97f4a7c15 * (trial + 1))";

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-trial stream. Doubles are built from the top 53 bits so the draws do
/// not depend on the standard library's distribution implementations.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, Index trial)
      : engine_(splitmix64(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1))) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

ParameterValues sample_parameters(TrialRng& rng, Index n, ParamLaw law) {
  std::vector<double> gaps(static_cast<std::size_t>(n + 1));
  for (double& g : gaps) g = law == ParamLaw::uniform_gap ? 0.05 + rng.uniform() : std::exp(0.75 * rng.normal());
  double total = 0.0;
  for (double g : gaps) total += g;
  ParameterValues t{{0.0}, true, false, 1.0};
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    acc += gaps[static_cast<std::size_t>(i)];
    t.values.push_back(acc / total);
  }
  return t;
}

double inside_draw(TrialRng& rng, const Bracket& b) {
  const double w = b.second - b.first;
  return b.first + w * (1e-6 + (1.0 - 2e-6) * rng.uniform());
}

/// n+2 domain knots drawn relative to the brackets.
DomainKnotsd sample_domain(TrialRng& rng, const std::vector<Bracket>& brackets, KnotLaw law) {
  DomainKnotsd d{{0.0}};
  for (const auto& b : brackets) {
    if (law == KnotLaw::boundary_stress) {
      const double w = b.second - b.first;
      const double dist = w * std::pow(10.0, -1.0 - 5.0 * rng.uniform());
      d.values.push_back(rng.uniform() < 0.5 ? b.first + dist : b.second - dist);
    } else {
      d.values.push_back(inside_draw(rng, b));
    }
  }
  d.values.push_back(1.0);
  if (law == KnotLaw::violating && brackets.size() >= 2) {
    const auto i = static_cast<std::size_t>(rng.integer(1, static_cast<int>(brackets.size()) - 1));
    const double hi = brackets[i - 1].second;
    d.values[i] = hi + (d.values[i + 1] - hi) * rng.uniform(0.1, 0.9);
  }
  return d;
}

/// Adds `extra` distinct uniform knots to the interior of d.
DomainKnotsd add_random_knots(TrialRng& rng, DomainKnotsd d, Index extra) {
  const double tol = knot_tolerance<double>();
  while (extra > 0) {
    const double x = rng.uniform(1e-6, 1.0 - 1e-6);
    auto it = std::lower_bound(d.values.begin(), d.values.end(), x);
    if (*it - x <= tol || x - *std::prev(it) <= tol) continue;
    d.values.insert(it, x);
    --extra;
  }
  return d;
}

TrialRecord measure(Index trial, int degree, const ParameterValues& tp, const DomainKnotsd& d, bool condition,
                    double rank_tol) {
  TrialRecord rec;
  rec.trial = trial;
  rec.degree = degree;
  rec.n = tp.last();
  rec.nhat = d.last_interior();
  rec.condition = condition;
  const auto kv = cyclic_knot_vector(d, degree);
  const auto sys = assemble_closed_system(tp, kv, rec.nhat);
  const auto rep = rank_report(sys.matrix, rank_tol);
  rec.rank = rep.rank;
  rec.rows = sys.matrix.rows();
  rec.sigma_ratio = rep.sigma_ratio();
  rec.full_rank = rep.rank == rec.rows;
  return rec;
}

template <typename F>
void run_parallel(Index count, int threads, F&& body) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (Index k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (Index k = w; k < count; k += threads) body(k);
    });
  }
  for (auto& th : pool) th.join();
}

void validate(const TrialConfig& cfg) {
  if (cfg.trials < 1) fail(ErrorKind::invalid_input, "trials must be at least 1");
  if (cfg.degrees.empty()) fail(ErrorKind::invalid_input, "no degrees given");
  for (int p : cfg.degrees)
    if (p < 1) fail(ErrorKind::invalid_input, "degrees must be at least 1");
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) fail(ErrorKind::invalid_input, "empty n range");
  if (cfg.extra_min < 0 || cfg.extra_max < cfg.extra_min) fail(ErrorKind::invalid_input, "empty n-hat extra range");
  if (!(cfg.rank_tolerance > 0.0)) fail(ErrorKind::invalid_input, "rank tolerance must be positive");
}

/// n drawn from the configured range, raised to the minimum a closed
/// interpolation of this degree admits.
Index draw_n(TrialRng& rng, const TrialConfig& cfg, int degree) {
  const int lo = std::max(cfg.n_min, degree + 1);
  const int hi = std::max(cfg.n_max, lo);
  return rng.integer(lo, hi);
}

template <typename Trial>
TrialReport run_trials(const TrialConfig& cfg, const char* experiment, Trial&& trial) {
  validate(cfg);
  TrialReport report;
  report.experiment = experiment;
  report.config = cfg;
  const Index per_degree = cfg.trials;
  const Index total = per_degree * static_cast<Index>(cfg.degrees.size());
  report.records.resize(static_cast<std::size_t>(total));
  run_parallel(total, cfg.threads, [&](Index k) {
    const int degree = cfg.degrees[static_cast<std::size_t>(k / per_degree)];
    TrialRng rng(cfg.seed, k);
    report.records[static_cast<std::size_t>(k)] = trial(k, degree, rng);
  });
  summarize(report);
  return report;
}

void append(std::ostringstream& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << key << ": " << buf << '\n';
}

const char* law_name(ParamLaw law) { return law == ParamLaw::uniform_gap ? "uniform-gap" : "lognormal-gap"; }

const char* law_name(KnotLaw law) {
  switch (law) {
    case KnotLaw::inside: return "inside";
    case KnotLaw::boundary_stress: return "boundary-stress";
    case KnotLaw::violating: return "violating";
    case KnotLaw::mixed: return "mixed";
  }
  return "?";
}

}  // namespace

bool exhaustive_witness_exists(const ParameterValues& t, const DomainKnotsd& domain, int degree) {
  const Index n = t.last();
  const Index nhat = domain.last_interior();
  if (nhat < n) return false;
  std::vector<bool> pick(static_cast<std::size_t>(nhat), false);
  std::fill(pick.begin(), pick.begin() + n, true);
  do {
    DomainKnotsd sub{{0.0}};
    for (Index k = 0; k < nhat; ++k)
      if (pick[static_cast<std::size_t>(k)]) sub.values.push_back(domain[k + 1]);
    sub.values.push_back(1.0);
    if (check_conjecture1(t, sub, degree)) return true;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

TrialReport run_conjecture1_trials(const TrialConfig& cfg) {
  return run_trials(cfg, "conjecture-1", [&](Index k, int degree, TrialRng& rng) {
    const Index n = draw_n(rng, cfg, degree);
    const auto tp = parity_parameters(sample_parameters(rng, n, cfg.param_law), degree);
    const auto brackets = interpolation_brackets(tp, degree);
    const KnotLaw law = cfg.knot_law == KnotLaw::mixed ? KnotLaw::inside : cfg.knot_law;
    const auto d = sample_domain(rng, brackets, law);
    return measure(k, degree, tp, d, check_conjecture1(tp, d, degree), cfg.rank_tolerance);
  });
}

TrialReport run_conjecture2_trials(const TrialConfig& cfg) {
  return run_trials(cfg, "conjecture-2", [&](Index k, int degree, TrialRng& rng) {
    const Index n = draw_n(rng, cfg, degree);
    const Index extra = rng.integer(cfg.extra_min, cfg.extra_max);
    const auto tp = parity_parameters(sample_parameters(rng, n, cfg.param_law), degree);
    const auto brackets = interpolation_brackets(tp, degree);
    KnotLaw law = cfg.knot_law;
    bool unconstrained = false;
    if (law == KnotLaw::mixed) {
      unconstrained = rng.uniform() < 0.5;
      law = KnotLaw::inside;
    }
    DomainKnotsd d;
    if (unconstrained)
      d = add_random_knots(rng, DomainKnotsd{{0.0, 1.0}}, n + extra);
    else
      d = add_random_knots(rng, sample_domain(rng, brackets, law), extra);
    const bool condition = check_conjecture2(tp, d, degree).holds;
    auto rec = measure(k, degree, tp, d, condition, cfg.rank_tolerance);
    if (n <= exhaustive_limit) rec.exhaustive = exhaustive_witness_exists(tp, d, degree);
    return rec;
  });
}

TrialReport boundary_stress(const TrialConfig& cfg, const std::vector<double>& epsilons) {
  validate(cfg);
  if (epsilons.empty()) fail(ErrorKind::invalid_input, "empty epsilon ladder");
  for (double e : epsilons)
    if (!(e >= 0.0 && e <= 0.5)) fail(ErrorKind::invalid_input, "epsilon must lie in [0, 0.5] bracket widths");
  TrialReport report;
  report.experiment = "boundary-stress";
  report.config = cfg;
  const Index rungs = static_cast<Index>(epsilons.size());
  const Index configs = static_cast<Index>(cfg.trials) * static_cast<Index>(cfg.degrees.size());
  report.records.resize(static_cast<std::size_t>(configs * rungs));
  run_parallel(configs, cfg.threads, [&](Index k) {
    const int degree = cfg.degrees[static_cast<std::size_t>(k / cfg.trials)];
    TrialRng rng(cfg.seed, k);
    const Index n = draw_n(rng, cfg, degree);
    const auto tp = parity_parameters(sample_parameters(rng, n, cfg.param_law), degree);
    const auto brackets = interpolation_brackets(tp, degree);
    const auto base = sample_domain(rng, brackets, KnotLaw::inside);
    const Index i = std::max<Index>(1, n / 2);
    const auto& b = brackets[static_cast<std::size_t>(i - 1)];
    for (Index r = 0; r < rungs; ++r) {
      const double eps = epsilons[static_cast<std::size_t>(r)];
      auto d = base;
      d.values[static_cast<std::size_t>(i)] = b.second - eps * (b.second - b.first);
      auto rec = measure(k * rungs + r, degree, tp, d, check_conjecture1(tp, d, degree), cfg.rank_tolerance);
      rec.epsilon = eps;
      report.records[static_cast<std::size_t>(k * rungs + r)] = rec;
    }
  });
  summarize(report);
  return report;
}

void summarize(TrialReport& report) {
  report.condition_true = report.full_rank = report.counterexamples = 0;
  report.exhaustive_checked = report.exhaustive_disagreements = 0;
  report.counterexample_trials.clear();
  report.min_sigma_ratio = std::numeric_limits<double>::infinity();
  for (const auto& r : report.records) {
    if (r.full_rank) ++report.full_rank;
    if (r.condition) {
      ++report.condition_true;
      report.min_sigma_ratio = std::min(report.min_sigma_ratio, r.sigma_ratio);
      if (!r.full_rank) {
        ++report.counterexamples;
        report.counterexample_trials.push_back(r.trial);
      }
    }
    if (r.exhaustive) {
      ++report.exhaustive_checked;
      if (*r.exhaustive != r.condition) ++report.exhaustive_disagreements;
    }
  }
  if (report.condition_true == 0) report.min_sigma_ratio = 0.0;
}

std::string format_report(const TrialReport& report, bool with_records) {
  const auto& cfg = report.config;
  std::ostringstream out;
  out << "# " << tool_name << " conjecture report\n";
  out << "tool: " << tool_name << ' ' << tool_version << '\n';
  out << "experiment: " << report.experiment << '\n';
  out << "generator: " << lab_generator_name << '\n';
  out << "seed: " << cfg.seed << '\n';
  append(out, "rank_tolerance", cfg.rank_tolerance);
  out << "degrees:";
  for (std::size_t k = 0; k < cfg.degrees.size(); ++k) out << (k ? "," : " ") << cfg.degrees[k];
  out << '\n';
  out << "n_range: " << cfg.n_min << ':' << cfg.n_max << '\n';
  out << "nhat_extra: " << cfg.extra_min << ':' << cfg.extra_max << '\n';
  out << "param_law: " << law_name(cfg.param_law) << '\n';
  out << "knot_law: " << law_name(cfg.knot_law) << '\n';
  out << "records: " << report.records.size() << '\n';
  out << "condition_true: " << report.condition_true << '\n';
  out << "full_rank: " << report.full_rank << '\n';
  out << "counterexamples: " << report.counterexamples << '\n';
  append(out, "min_sigma_ratio_condition_true", report.min_sigma_ratio);
  out << "exhaustive_checked: " << report.exhaustive_checked << '\n';
  out << "exhaustive_disagreements: " << report.exhaustive_disagreements << '\n';
  out << "counterexample_trials:";
  for (Index t : report.counterexample_trials) out << ' ' << t;
  out << '\n';
  if (with_records) {
    out << "# trial degree n nhat condition rank rows sigma_ratio exhaustive epsilon\n";
    char buf[64];
    for (const auto& r : report.records) {
      out << r.trial << ' ' << r.degree << ' ' << r.n << ' ' << r.nhat << ' ' << (r.condition ? 1 : 0) << ' '
          << r.rank << ' ' << r.rows << ' ';
      std::snprintf(buf, sizeof buf, "%.17g", r.sigma_ratio);
      out << buf << ' ' << (r.exhaustive ? (*r.exhaustive ? "1" : "0") : "-") << ' ';
      if (r.epsilon) {
        std::snprintf(buf, sizeof buf, "%.17g", *r.epsilon);
        out << buf;
      } else {
        out << '-';
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace closedloft
