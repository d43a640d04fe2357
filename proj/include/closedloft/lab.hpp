#ifndef CLOSEDLOFT_LAB_HPP
#define CLOSEDLOFT_LAB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "closedloft/linalg.hpp"

namespace closedloft {

/// How parameter gaps are drawn.
enum class ParamLaw {
  uniform_gap,    // gap ~ 0.05 + U[0, 1)
  lognormal_gap,  // gap ~ exp(0.75 N(0, 1))
};

/// How domain knots are drawn relative to the interpolation brackets.
enum class KnotLaw {
  inside,           // uniform inside each bracket shrunk by 1e-6 of its width
  boundary_stress,  // inside, at a log-uniform distance in [1e-6, 1e-1] widths from an end
  violating,        // inside, then one knot moved above its bracket
  mixed,            // per trial: inside or unconstrained uniform knots (oversized D only)
};

struct TrialConfig {
  std::vector<int> degrees{2, 3, 4, 5};
  int n_min = 6;
  int n_max = 40;
  int extra_min = 0;  // n̂ - n
  int extra_max = 0;
  int trials = 1000;  // per degree
  std::uint64_t seed = 42;
  double rank_tolerance = default_rank_tolerance;
  ParamLaw param_law = ParamLaw::uniform_gap;
  KnotLaw knot_law = KnotLaw::inside;
  int threads = 1;
};

struct TrialRecord {
  Index trial = 0;
  int degree = 0;
  Index n = 0;
  Index nhat = 0;
  bool condition = false;
  Index rank = 0;
  Index rows = 0;
  double sigma_ratio = 0.0;
  bool full_rank = false;
  std::optional<bool> exhaustive;  // exhaustive subset verdict, when computed
  std::optional<double> epsilon;   // boundary-stress distance (bracket widths)
};

struct TrialReport {
  std::string experiment;
  TrialConfig config;
  std::vector<TrialRecord> records;

  Index condition_true = 0;
  Index full_rank = 0;
  Index counterexamples = 0;  // condition true but not full rank
  double min_sigma_ratio = 0.0;  // over condition-true records
  Index exhaustive_checked = 0;
  Index exhaustive_disagreements = 0;
  std::vector<Index> counterexample_trials;
};

/// Name of the random generator used by the trials.
extern const char* const lab_generator_name;

/// Largest n for which conjecture-2 trials also run the exhaustive subset search.
constexpr Index exhaustive_limit = 8;

TrialReport run_conjecture1_trials(const TrialConfig& cfg);
TrialReport run_conjecture2_trials(const TrialConfig& cfg);

/// Moves one knot to `epsilon` bracket widths below its bracket's upper end
/// for each epsilon in the ladder (0 puts it on the end).
TrialReport boundary_stress(const TrialConfig& cfg, const std::vector<double>& epsilons);

/// Independent check for the greedy witness search: tries every subset.
bool exhaustive_witness_exists(const ParameterValues& t, const DomainKnotsd& domain, int degree);

/// Line-oriented report text; identical input gives identical bytes.
std::string format_report(const TrialReport& report, bool with_records = true);

/// Recomputes the aggregate fields from the records.
void summarize(TrialReport& report);

}  // namespace closedloft

#endif  // CLOSEDLOFT_LAB_HPP
