#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codon/code_algebra.hpp"
#include "codon/instruction_set.hpp"
#include "codon/rng.hpp"
#include "codon/tape.hpp"
#include "codon/vm.hpp"

namespace codon {

enum class MutationKind : std::uint8_t {
  Reproduction,
  Crossover,
  PointMutation,
  Swap,
  Editing,
  Add,
  Delete,
  Encapsulate,
};

std::string_view to_string(MutationKind k) noexcept;
MutationKind parse_mutation_kind(std::string_view name);

struct LengthBounds {
  std::size_t min = 1;
  std::size_t max = 400;

  bool admits(std::size_t n) const noexcept { return n >= min && n <= max; }

  friend bool operator==(const LengthBounds&, const LengthBounds&) = default;
};

// The perturbation mapping: which operators, how often, and how strongly a
// fitness change scales the number of operators applied per step. The policy
// itself is never modified by evolution.
struct PerturbationPolicy {
  std::map<MutationKind, double> weights;  // kinds with weight > 0 are enabled
  double kappa = 0.0;
  LengthBounds length_bounds;
  std::size_t max_applied = 20;

  void validate() const;

  // Uniform over POINT_MUTATION, SWAP, ADD, DELETE with kappa 0.
  static PerturbationPolicy random_walk();
  // All eight operators, equally weighted.
  static PerturbationPolicy uniform_all(double kappa);

  friend bool operator==(const PerturbationPolicy&, const PerturbationPolicy&) = default;
};

struct FitnessFunction {
  std::string name;
  std::function<double(const Tape&)> evaluate;

  double operator()(const Tape& t) const { return evaluate(t); }

  // Renyi entropy (alpha = 2, bits) of the tape's codon frequencies; 0 on empty.
  static FitnessFunction renyi2_tape_entropy();
  static FitnessFunction executability(InstructionSet iset, Limits limits = {});
  static FitnessFunction reproductivity(InstructionSet iset, Limits limits = {});
};

// "renyi2", "executability", "reproductivity".
FitnessFunction fitness_by_name(std::string_view name, InstructionSet iset,
                                const Limits& limits = {});

struct Population {
  std::vector<Tape> members;
  std::size_t generation = 0;

  friend bool operator==(const Population&, const Population&) = default;
};

// Deterministic building blocks. Each returns a new tape.
Tape crossover(const Tape& tape, const Tape& partner, std::size_t cut);
Tape point_mutate(const Tape& tape, std::size_t pos, Codon replacement);
Tape swap_codons(const Tape& tape, std::size_t i, std::size_t j);
Tape insert_codon(const Tape& tape, std::size_t pos, Codon c);
Tape delete_codon(const Tape& tape, std::size_t pos);
Tape append_duplicate(const Tape& tape, std::size_t first, std::size_t length);
// Removes adjacent COND codons at pos, pos+1 (two toggles cancel).
Tape collapse_cond_pair(const Tape& tape, std::size_t pos);

// One operator application. CROSSOVER requires a partner (ContractError
// otherwise). A draw that would leave `bounds` is retried at a fresh site a few
// times and then degrades to the identity.
Tape apply_mutation(const Tape& tape, MutationKind kind, const Tape* partner, Rng& rng,
                    const LengthBounds& bounds = {});
Tape apply_mutation(const Tape& tape, MutationKind kind, const Tape* partner,
                    std::uint64_t seed, const LengthBounds& bounds = {});

// clamp(1, max_applied, round_half_even(kappa * |delta_f|)).
std::size_t applied_count(const PerturbationPolicy& policy, double delta_f);

struct StepResult {
  Tape tape;
  std::size_t applied_count = 0;
};

// One passive update: the number of operators applied is proportional to the
// latest fitness change. CROSSOVER draws without a partner are identities.
StepResult passive_step(const Tape& tape, const FitnessFunction& fitness, double prev_fitness,
                        const PerturbationPolicy& policy, std::uint64_t seed,
                        const Tape* partner = nullptr);

// Same rule with the current fitness already known.
StepResult passive_step_from(const Tape& tape, double current_fitness, double prev_fitness,
                             const PerturbationPolicy& policy, Rng& rng,
                             const Tape* partner = nullptr);

// Mean distance between index-matched members is below tol.
bool has_converged(const Population& current, const Population& previous, MetricKind metric,
                   double tol);

struct GenerationStats {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
};

struct EvolveOptions {
  bool elitism = true;
  bool maximize = true;
  std::size_t jobs = 1;
};

struct EvolveResult {
  Population population;
  std::vector<GenerationStats> history;  // entry 0 is the initial population
};

EvolveResult evolve(const Population& pop, const FitnessFunction& fitness,
                    const PerturbationPolicy& policy, std::size_t generations,
                    std::uint64_t seed, const EvolveOptions& options = {});

void write_history_csv(std::ostream& out, const std::vector<GenerationStats>& history);

}  // namespace codon
