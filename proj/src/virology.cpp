#include "codon/virology.hpp"

#include "codon/errors.hpp"

namespace codon {

std::string_view to_string(ViralKind k) noexcept {
  switch (k) {
    case ViralKind::Commensalistic: return "COMMENSALISTIC";
    case ViralKind::Symbiotic: return "SYMBIOTIC";
    case ViralKind::Parasitic: return "PARASITIC";
  }
  return "SYMBIOTIC";
}

InfectionRecord inject(const Tape& host, const CodeSegment& virus, std::size_t site,
                       std::optional<CodeSegment> payload) {
  require(site <= host.size(), "inject: site must be within 0..|host|");
  if (payload) require(code_contains(*payload, virus), "inject: payload must lie inside the virus");
  std::vector<Codon> out(host.begin(), host.begin() + static_cast<std::ptrdiff_t>(site));
  out.insert(out.end(), virus.begin(), virus.end());
  out.insert(out.end(), host.begin() + static_cast<std::ptrdiff_t>(site), host.end());
  InfectionRecord r{host, virus, site, Tape(std::move(out)), std::move(payload), false};
  r.disjoint = code_intersection(virus, host).empty();
  return r;
}

Tape remove_infection(const InfectionRecord& record) {
  std::vector<Codon> out = record.infected.codons();
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(record.site),
            out.begin() + static_cast<std::ptrdiff_t>(record.site + record.virus.size()));
  return Tape(std::move(out));
}

bool nu_executable(const CodeSegment& virus, InstructionSet iset, const Limits& limits) {
  return is_executable(virus, iset, limits);
}

bool nu_reproductive(const CodeSegment& virus, InstructionSet iset, const Limits& limits) {
  return is_reproductive(virus, iset, limits);
}

bool carries_payload(const InfectionRecord& record, InstructionSet iset, const Limits& limits) {
  require(record.payload.has_value(), "carries_payload: record has no payload");
  const auto out = execute_nested(record.infected, iset, limits);
  for (const auto& p : out.progeny)
    if (code_contains(*record.payload, p)) return true;
  for (const auto& p : out.products)
    if (code_contains(*record.payload, p.tape)) return true;
  return false;
}

ViralKind classify_delta(double delta_f, double tol) {
  require(tol >= 0.0, "classify: tol must be >= 0");
  if (delta_f > tol) return ViralKind::Commensalistic;
  if (delta_f < -tol) return ViralKind::Parasitic;
  return ViralKind::Symbiotic;
}

ViralClassification classify(const InfectionRecord& record, const FitnessFunction& fitness,
                             double tol) {
  const double delta = fitness(record.infected) - fitness(record.host);
  return {classify_delta(delta, tol), delta};
}

}  // namespace codon
