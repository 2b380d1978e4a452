#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codon/errors.hpp"
#include "codon/evolution.hpp"
#include "codon/instruction_set.hpp"
#include "codon/vm.hpp"

namespace codon {

// ---- statistics -----------------------------------------------------------

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population convention (divide by n)
};

// Throws ContractError on empty input.
Summary summarize(const std::vector<double>& values);

// Thrown by pearson_r when a column has zero variance.
class UndefinedCorrelation : public ContractError {
 public:
  using ContractError::ContractError;
};

// Sample Pearson correlation, clamped to [-1, 1].
double pearson_r(const std::vector<double>& xs, const std::vector<double>& ys);

// Linear-interpolated quantile, q in [0, 1]. Throws on empty input.
double quantile(std::vector<double> values, double q);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Percentile bootstrap interval for pearson_r. Resamples with a constant
// column are redrawn.
Interval bootstrap_pearson_ci(const std::vector<double>& xs, const std::vector<double>& ys,
                              std::size_t resamples, double level, std::uint64_t seed);

// ---- experiment 1: iterations to an executable / reproductive tape ----------

enum class Exp1Target : std::uint8_t { Executable, Reproductive };

std::string_view to_string(Exp1Target t) noexcept;
// "exec" / "repro" (also "executable" / "reproductive").
Exp1Target parse_exp1_target(std::string_view name);

struct Exp1Config {
  InstructionSet iset = InstructionSet::Set1;
  std::size_t runs = 1000;
  std::size_t iteration_cap = 1'000'000;
  std::size_t tape_length = 50;
  Exp1Target target = Exp1Target::Executable;
  Limits limits;
  std::uint64_t seed = 1;
  // Draw a fresh random tape each iteration instead of perturbing.
  bool fresh = false;
  PerturbationPolicy policy = PerturbationPolicy::random_walk();
  std::size_t jobs = 1;

  void validate() const;
};

struct Exp1Run {
  std::size_t run = 0;
  bool found = false;
  std::size_t iterations = 0;  // iteration_cap when not found
};

struct Exp1Stats {
  std::vector<Exp1Run> runs;
  std::size_t found = 0;
  std::size_t capped = 0;
  // Over found runs only; zero when nothing was found.
  double mean_iterations = 0.0;
  double std_iterations = 0.0;
  double p50 = 0.0, p90 = 0.0, p99 = 0.0;
};

// One run: pure function of (config, run index).
Exp1Run run_experiment1_once(const Exp1Config& config, std::size_t run);
Exp1Stats run_experiment1(const Exp1Config& config);

// CSV: run,found,iterations
void write_exp1_csv(std::ostream& out, const Exp1Stats& stats);
std::string exp1_summary_json(const Exp1Config& config, const Exp1Stats& stats);

// ---- experiment 2: reproduction vs. total entropy ---------------------------

struct Exp2Config {
  InstructionSet iset = InstructionSet::Set1;
  std::size_t runs = 1000;
  std::size_t iteration_cap = 1'000'000;
  std::size_t progeny_cap = 50;
  double alpha = 2.0;
  double kappa = 10.0;
  std::size_t tape_length = 50;
  std::uint64_t seed = 1;
  bool maximize = true;  // fitness direction of the acceptance rule
  Limits limits;         // progeny_cap above overrides limits.progeny_cap
  PerturbationPolicy policy = PerturbationPolicy::random_walk();  // kappa above overrides
  std::size_t jobs = 1;
  // Start every run from this tape instead of a random one.
  std::optional<Tape> initial;

  void validate() const;
};

struct Exp2Sample {
  std::size_t run = 0;
  std::size_t reproductions = 0;
  double total_entropy = 0.0;
  std::size_t iterations = 0;
  HaltReason final_halt = HaltReason::NoStart;
  bool self_modified = false;
  std::optional<Cycle> cycle;
};

struct Exp2Stats {
  std::vector<Exp2Sample> samples;
  Summary reproductions;
  Summary entropy;
  std::optional<double> r;  // absent when a column is constant
  // Fraction of budget-exhausted final executions with a detected cycle;
  // absent when no run ended in STEP_BUDGET.
  std::optional<double> periodic_fraction;
  std::size_t non_terminating = 0;
};

Exp2Sample run_experiment2_once(const Exp2Config& config, std::size_t run);
Exp2Stats run_experiment2(const Exp2Config& config);

// CSV: run,reproductions,total_entropy,periodic,period
void write_exp2_csv(std::ostream& out, const Exp2Stats& stats);
// {mean_repro, std_repro, mean_entropy, std_entropy, r, ...}
std::string exp2_summary_json(const Exp2Config& config, const Exp2Stats& stats);

}  // namespace codon
