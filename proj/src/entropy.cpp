#include "codon/entropy.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "codon/errors.hpp"

namespace codon {

Distribution::Distribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
  require(!p_.empty(), "distribution must have at least one outcome");
  double total = 0.0;
  for (double p : p_) {
    require(p >= 0.0 && std::isfinite(p), "distribution entries must be finite and >= 0");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-9, "distribution must sum to 1 within 1e-9");
}

Distribution Distribution::from_counts(const std::vector<std::size_t>& counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  require(total > 0, "distribution needs at least one observation");
  std::vector<double> p;
  for (std::size_t c : counts)
    if (c) p.push_back(static_cast<double>(c) / static_cast<double>(total));
  return Distribution(std::move(p));
}

double renyi_entropy(const Distribution& dist, double alpha) {
  require(alpha >= 0.0, "renyi entropy: alpha must be >= 0");
  require(alpha != 1.0, "renyi entropy: alpha == 1 is the Shannon limit; use shannon_entropy");
  double sum = 0.0;
  for (double p : dist.probabilities())
    if (p > 0.0) sum += std::pow(p, alpha);
  const double h = std::log2(sum) / (1.0 - alpha);
  return h < 0.0 ? 0.0 : h;  // clears -0.0 and rounding below zero
}

double shannon_entropy(const Distribution& dist) {
  double h = 0.0;
  for (double p : dist.probabilities())
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

Distribution tape_distribution(const Tape& tape) {
  require(!tape.empty(), "tape_distribution: tape must be non-empty");
  std::vector<std::size_t> counts(kCodonCount, 0);
  for (Codon c : tape) ++counts[static_cast<std::size_t>(c.index())];
  return Distribution::from_counts(counts);
}

Distribution machine_distribution(const std::vector<TraceEntry>& trace) {
  require(!trace.empty(), "machine_distribution: trace must be non-empty");
  std::map<std::pair<Opcode, bool>, std::size_t> symbols;
  for (const auto& e : trace) ++symbols[{e.opcode, e.flag_after}];
  std::vector<std::size_t> counts;
  counts.reserve(symbols.size());
  for (const auto& [key, n] : symbols) counts.push_back(n);
  return Distribution::from_counts(counts);
}

double code_entropy(const Tape& tape, double alpha) {
  return tape.empty() ? 0.0 : renyi_entropy(tape_distribution(tape), alpha);
}

namespace {

double trace_entropy(const std::vector<TraceEntry>& trace, double alpha) {
  return trace.empty() ? 0.0 : renyi_entropy(machine_distribution(trace), alpha);
}

}  // namespace

double EntropyReport::ledger_sum() const {
  double sum = s_code + s_machine;
  for (double s : s_progeny) sum += s;
  for (const auto& p : s_products) sum += p.value;
  return sum;
}

std::string EntropyReport::to_json() const {
  nlohmann::ordered_json j;
  j["s_code"] = s_code;
  j["s_machine"] = s_machine;
  j["s_progeny"] = s_progeny;
  auto products = nlohmann::ordered_json::array();
  for (const auto& p : s_products) products.push_back({{"level", p.level}, {"value", p.value}});
  j["s_products"] = products;
  j["total"] = total;
  j["alpha"] = alpha;
  return j.dump();
}

EntropyReport system_entropy(const ExecutionOutcome& outcome, double alpha) {
  require(alpha >= 0.0 && alpha != 1.0, "system_entropy: alpha must be >= 0 and != 1");
  EntropyReport r;
  r.alpha = alpha;
  r.s_code = code_entropy(outcome.final_tape, alpha);
  r.s_machine = trace_entropy(outcome.trace, alpha);
  r.s_progeny.reserve(outcome.progeny.size());
  for (const auto& t : outcome.progeny) r.s_progeny.push_back(code_entropy(t, alpha));
  for (const auto& p : outcome.products)
    r.s_products.push_back({p.level, code_entropy(p.tape, alpha) + trace_entropy(p.trace, alpha)});
  r.total = r.ledger_sum();
  return r;
}

}  // namespace codon
