#include "codon/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "codon/entropy.hpp"
#include "codon/errors.hpp"
#include "codon/parallel.hpp"

namespace codon {

namespace {

constexpr int kSiteRetries = 8;

Codon random_codon(Rng& rng) {
  return Codon::from_index(static_cast<int>(uniform_index(rng, kCodonCount)));
}

bool is_cond(Codon c) {
  // COND codons are shared by both instruction sets.
  return decode(c, InstructionSet::Set1) == Opcode::Cond;
}

// One draw of the operator; nullopt when it has no admissible site.
std::optional<Tape> draw_once(const Tape& tape, MutationKind kind, const Tape* partner,
                              Rng& rng) {
  const std::size_t n = tape.size();
  switch (kind) {
    case MutationKind::Reproduction:
      return tape;
    case MutationKind::Crossover: {
      const std::size_t limit = std::min(n, partner->size());
      return crossover(tape, *partner, uniform_index(rng, limit + 1));
    }
    case MutationKind::PointMutation:
      if (n == 0) return std::nullopt;
      return point_mutate(tape, uniform_index(rng, n), random_codon(rng));
    case MutationKind::Swap: {
      if (n < 2) return std::nullopt;
      const std::size_t i = uniform_index(rng, n);
      std::size_t j = uniform_index(rng, n - 1);
      if (j >= i) ++j;
      return swap_codons(tape, i, j);
    }
    case MutationKind::Editing: {
      std::vector<std::size_t> sites;
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (is_cond(tape[i]) && is_cond(tape[i + 1])) sites.push_back(i);
      if (sites.empty()) return tape;
      return collapse_cond_pair(tape, sites[uniform_index(rng, sites.size())]);
    }
    case MutationKind::Add: {
      const std::size_t pos = uniform_index(rng, n + 1);
      return insert_codon(tape, pos, random_codon(rng));
    }
    case MutationKind::Delete:
      if (n == 0) return std::nullopt;
      return delete_codon(tape, uniform_index(rng, n));
    case MutationKind::Encapsulate: {
      if (n == 0) return std::nullopt;
      const std::size_t max_len = std::max<std::size_t>(1, n / 4);
      const std::size_t len = 1 + uniform_index(rng, max_len);
      const std::size_t first = uniform_index(rng, n - len + 1);
      return append_duplicate(tape, first, len);
    }
  }
  return std::nullopt;
}

double round_half_even(double x) { return std::nearbyint(x); }

MutationKind draw_kind(const PerturbationPolicy& policy, Rng& rng) {
  double total = 0.0;
  for (const auto& [kind, w] : policy.weights) total += w;
  double r = std::uniform_real_distribution<double>(0.0, total)(rng);
  MutationKind last = MutationKind::Reproduction;
  for (const auto& [kind, w] : policy.weights) {
    if (w <= 0.0) continue;
    last = kind;
    if (r < w) return kind;
    r -= w;
  }
  return last;
}

}  // namespace

std::string_view to_string(MutationKind k) noexcept {
  switch (k) {
    case MutationKind::Reproduction: return "reproduction";
    case MutationKind::Crossover: return "crossover";
    case MutationKind::PointMutation: return "point";
    case MutationKind::Swap: return "swap";
    case MutationKind::Editing: return "editing";
    case MutationKind::Add: return "add";
    case MutationKind::Delete: return "delete";
    case MutationKind::Encapsulate: return "encapsulate";
  }
  return "reproduction";
}

MutationKind parse_mutation_kind(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(MutationKind::Encapsulate); ++k) {
    const auto kind = static_cast<MutationKind>(k);
    if (to_string(kind) == name) return kind;
  }
  throw ContractError("unknown mutation kind '" + std::string(name) + "'");
}

void PerturbationPolicy::validate() const {
  require(kappa >= 0.0 && std::isfinite(kappa), "policy: kappa must be finite and >= 0");
  require(length_bounds.min >= 1, "policy: minimum tape length must be >= 1");
  require(length_bounds.min <= length_bounds.max, "policy: length bounds are inverted");
  require(max_applied >= 1, "policy: max_applied must be >= 1");
  double total = 0.0;
  bool any = false;
  for (const auto& [kind, w] : weights) {
    require(w >= 0.0 && std::isfinite(w), "policy: weights must be finite and >= 0");
    total += w;
    any = any || w > 0.0;
  }
  require(any, "policy: at least one mutation kind must be enabled");
  require(std::abs(total - 1.0) <= 1e-9, "policy: weights must sum to 1");
}

PerturbationPolicy PerturbationPolicy::random_walk() {
  PerturbationPolicy p;
  p.weights = {{MutationKind::PointMutation, 0.25},
               {MutationKind::Swap, 0.25},
               {MutationKind::Add, 0.25},
               {MutationKind::Delete, 0.25}};
  return p;
}

PerturbationPolicy PerturbationPolicy::uniform_all(double kappa) {
  PerturbationPolicy p;
  for (int k = 0; k <= static_cast<int>(MutationKind::Encapsulate); ++k)
    p.weights[static_cast<MutationKind>(k)] = 1.0 / 8.0;
  p.kappa = kappa;
  return p;
}

FitnessFunction FitnessFunction::renyi2_tape_entropy() {
  return {"renyi2", [](const Tape& t) { return code_entropy(t, 2.0); }};
}

FitnessFunction FitnessFunction::executability(InstructionSet iset, Limits limits) {
  limits.validate();
  return {"executability",
          [=](const Tape& t) { return is_executable(t, iset, limits) ? 1.0 : 0.0; }};
}

FitnessFunction FitnessFunction::reproductivity(InstructionSet iset, Limits limits) {
  limits.validate();
  return {"reproductivity",
          [=](const Tape& t) { return is_reproductive(t, iset, limits) ? 1.0 : 0.0; }};
}

FitnessFunction fitness_by_name(std::string_view name, InstructionSet iset,
                                const Limits& limits) {
  if (name == "renyi2") return FitnessFunction::renyi2_tape_entropy();
  if (name == "executability") return FitnessFunction::executability(iset, limits);
  if (name == "reproductivity") return FitnessFunction::reproductivity(iset, limits);
  throw ContractError("unknown fitness '" + std::string(name) +
                      "' (expected renyi2, executability, reproductivity)");
}

Tape crossover(const Tape& tape, const Tape& partner, std::size_t cut) {
  require(cut <= tape.size() && cut <= partner.size(), "crossover: cut beyond a parent");
  std::vector<Codon> out(tape.begin(), tape.begin() + static_cast<std::ptrdiff_t>(cut));
  out.insert(out.end(), partner.begin() + static_cast<std::ptrdiff_t>(cut), partner.end());
  return Tape(std::move(out));
}

Tape point_mutate(const Tape& tape, std::size_t pos, Codon replacement) {
  require(pos < tape.size(), "point_mutate: position out of range");
  std::vector<Codon> out = tape.codons();
  out[pos] = replacement;
  return Tape(std::move(out));
}

Tape swap_codons(const Tape& tape, std::size_t i, std::size_t j) {
  require(i < tape.size() && j < tape.size(), "swap_codons: position out of range");
  std::vector<Codon> out = tape.codons();
  std::swap(out[i], out[j]);
  return Tape(std::move(out));
}

Tape insert_codon(const Tape& tape, std::size_t pos, Codon c) {
  require(pos <= tape.size(), "insert_codon: position out of range");
  std::vector<Codon> out = tape.codons();
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), c);
  return Tape(std::move(out));
}

Tape delete_codon(const Tape& tape, std::size_t pos) {
  require(pos < tape.size(), "delete_codon: position out of range");
  std::vector<Codon> out = tape.codons();
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
  return Tape(std::move(out));
}

Tape append_duplicate(const Tape& tape, std::size_t first, std::size_t length) {
  require(first + length <= tape.size(), "append_duplicate: segment out of range");
  std::vector<Codon> out = tape.codons();
  out.insert(out.end(), tape.begin() + static_cast<std::ptrdiff_t>(first),
             tape.begin() + static_cast<std::ptrdiff_t>(first + length));
  return Tape(std::move(out));
}

Tape collapse_cond_pair(const Tape& tape, std::size_t pos) {
  require(pos + 1 < tape.size() && is_cond(tape[pos]) && is_cond(tape[pos + 1]),
          "collapse_cond_pair: no COND pair at position");
  std::vector<Codon> out = tape.codons();
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos),
            out.begin() + static_cast<std::ptrdiff_t>(pos + 2));
  return Tape(std::move(out));
}

Tape apply_mutation(const Tape& tape, MutationKind kind, const Tape* partner, Rng& rng,
                    const LengthBounds& bounds) {
  require(kind != MutationKind::Crossover || partner != nullptr,
          "apply_mutation: CROSSOVER requires a partner");
  for (int attempt = 0; attempt < kSiteRetries; ++attempt) {
    auto out = draw_once(tape, kind, partner, rng);
    if (!out) break;
    if (bounds.admits(out->size()) || out->size() == tape.size()) return std::move(*out);
  }
  return tape;
}

Tape apply_mutation(const Tape& tape, MutationKind kind, const Tape* partner,
                    std::uint64_t seed, const LengthBounds& bounds) {
  Rng rng(seed);
  return apply_mutation(tape, kind, partner, rng, bounds);
}

std::size_t applied_count(const PerturbationPolicy& policy, double delta_f) {
  const double raw = round_half_even(policy.kappa * std::abs(delta_f));
  if (!(raw >= 1.0)) return 1;  // also catches NaN
  return static_cast<std::size_t>(std::min(raw, static_cast<double>(policy.max_applied)));
}

StepResult passive_step_from(const Tape& tape, double current_fitness, double prev_fitness,
                             const PerturbationPolicy& policy, Rng& rng, const Tape* partner) {
  StepResult r{tape, applied_count(policy, current_fitness - prev_fitness)};
  for (std::size_t i = 0; i < r.applied_count; ++i) {
    const MutationKind kind = draw_kind(policy, rng);
    if (kind == MutationKind::Crossover && partner == nullptr) continue;
    r.tape = apply_mutation(r.tape, kind, partner, rng, policy.length_bounds);
  }
  return r;
}

StepResult passive_step(const Tape& tape, const FitnessFunction& fitness, double prev_fitness,
                        const PerturbationPolicy& policy, std::uint64_t seed,
                        const Tape* partner) {
  policy.validate();
  Rng rng(seed);
  return passive_step_from(tape, fitness(tape), prev_fitness, policy, rng, partner);
}

bool has_converged(const Population& current, const Population& previous, MetricKind metric,
                   double tol) {
  require(current.members.size() == previous.members.size(),
          "has_converged: populations differ in size");
  if (current.members.empty()) return true;
  double sum = 0.0;
  for (std::size_t i = 0; i < current.members.size(); ++i)
    sum += distance(current.members[i], previous.members[i], metric);
  return sum / static_cast<double>(current.members.size()) < tol;
}

EvolveResult evolve(const Population& pop, const FitnessFunction& fitness,
                    const PerturbationPolicy& policy, std::size_t generations,
                    std::uint64_t seed, const EvolveOptions& options) {
  policy.validate();
  EvolveResult result{pop, {}};
  auto& members = result.population.members;
  if (generations > 0) require(!members.empty(), "evolve: population must be non-empty");

  const double sign = options.maximize ? 1.0 : -1.0;
  std::vector<double> score(members.size());
  auto evaluate_all = [&] {
    parallel_for(members.size(), options.jobs, [&](std::size_t i) { score[i] = fitness(members[i]); });
  };
  auto record = [&](std::size_t generation) {
    if (members.empty()) return;
    double best = score[0], sum = 0.0;
    for (double s : score) {
      if (sign * s > sign * best) best = s;
      sum += s;
    }
    result.history.push_back({generation, best, sum / static_cast<double>(score.size())});
  };

  evaluate_all();
  record(result.population.generation);
  std::vector<double> previous = score;

  for (std::size_t g = 0; g < generations; ++g) {
    std::size_t elite = 0;
    for (std::size_t i = 1; i < members.size(); ++i)
      if (sign * score[i] > sign * score[elite]) elite = i;

    const std::vector<Tape> parents = members;
    parallel_for(members.size(), options.jobs, [&](std::size_t i) {
      if (options.elitism && i == elite) return;
      Rng rng(derive_seed(seed, {result.population.generation, i}));
      const Tape* partner = nullptr;
      if (parents.size() > 1) {
        std::size_t j = uniform_index(rng, parents.size() - 1);
        if (j >= i) ++j;
        partner = &parents[j];
      }
      members[i] = passive_step_from(parents[i], score[i], previous[i], policy, rng, partner).tape;
    });
    previous = score;
    ++result.population.generation;
    evaluate_all();
    record(result.population.generation);
  }
  return result;
}

void write_history_csv(std::ostream& out, const std::vector<GenerationStats>& history) {
  out << "generation,best,mean\n";
  char buf[96];
  for (const auto& h : history) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g\n", h.generation, h.best, h.mean);
    out << buf;
  }
}

}  // namespace codon
