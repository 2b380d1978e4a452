#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "codon/tape.hpp"
#include "codon/vm.hpp"

namespace codon {

// A finite probability vector: entries >= 0 summing to 1 within 1e-9.
class Distribution {
 public:
  // Throws ContractError on negative entries or a bad total.
  explicit Distribution(std::vector<double> probabilities);

  // Normalised empirical frequencies; zero counts are dropped.
  static Distribution from_counts(const std::vector<std::size_t>& counts);

  const std::vector<double>& probabilities() const noexcept { return p_; }
  std::size_t size() const noexcept { return p_.size(); }

 private:
  std::vector<double> p_;
};

// (1 / (1 - alpha)) * log2(sum p^alpha), in bits. Zero entries contribute
// nothing. Requires alpha >= 0 and alpha != 1; use shannon_entropy for the
// alpha -> 1 limit.
double renyi_entropy(const Distribution& dist, double alpha);

// -sum p log2 p. The alpha -> 1 limit of renyi_entropy; not one of the ledger terms.
double shannon_entropy(const Distribution& dist);

// Codon frequencies of a non-empty tape.
Distribution tape_distribution(const Tape& tape);

// Frequencies of (opcode, flag_after) symbols over a non-empty trace.
Distribution machine_distribution(const std::vector<TraceEntry>& trace);

struct ProductEntropy {
  std::size_t level = 1;
  double value = 0.0;  // code entropy plus machine entropy of its own run
};

struct EntropyReport {
  double s_code = 0.0;
  double s_machine = 0.0;
  std::vector<double> s_progeny;
  std::vector<ProductEntropy> s_products;
  double total = 0.0;
  double alpha = 2.0;

  // s_code + s_machine + sum(progeny) + sum(products), recomputed.
  double ledger_sum() const;
  // JSON object: s_code, s_machine, s_progeny[], s_products[{level,value}], total, alpha.
  std::string to_json() const;
};

// Entropy of a tape's codon frequencies; 0 for an empty tape.
double code_entropy(const Tape& tape, double alpha);

// total = s_machine + s_code + sum over progeny + sum over product code.
EntropyReport system_entropy(const ExecutionOutcome& outcome, double alpha = 2.0);

}  // namespace codon
