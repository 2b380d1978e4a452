#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "codon/code_algebra.hpp"
#include "codon/evolution.hpp"
#include "codon/instruction_set.hpp"
#include "codon/vm.hpp"

namespace codon {

struct InfectionRecord {
  Tape host;                 // pristine code
  CodeSegment virus;
  std::size_t site = 0;      // insertion index into host
  Tape infected;             // host[0, site) + virus + host[site, end)
  std::optional<CodeSegment> payload;  // contained in virus when present
  // Whether virus and host share no common segment. The classification assumes
  // this; it is recorded, not enforced.
  bool disjoint = false;
};

// Naming: a fitness gain is "commensalistic" and no change is "symbiotic",
// which differs from common biological usage.
enum class ViralKind : std::uint8_t { Commensalistic, Symbiotic, Parasitic };

std::string_view to_string(ViralKind k) noexcept;

struct ViralClassification {
  ViralKind kind = ViralKind::Symbiotic;
  double delta_f = 0.0;
};

// Requires site <= |host|; a payload must occur inside the virus.
InfectionRecord inject(const Tape& host, const CodeSegment& virus, std::size_t site,
                       std::optional<CodeSegment> payload = std::nullopt);

// infected with the spliced virus span removed; equals host.
Tape remove_infection(const InfectionRecord& record);

bool nu_executable(const CodeSegment& virus, InstructionSet iset, const Limits& limits = {});
bool nu_reproductive(const CodeSegment& virus, InstructionSet iset, const Limits& limits = {});

// Some progeny or product of running the infected tape contains the payload.
// Throws ContractError when the record has no payload.
bool carries_payload(const InfectionRecord& record, InstructionSet iset,
                     const Limits& limits = {});

// delta_f = F(infected) - F(host): > tol commensalistic, |.| <= tol symbiotic,
// < -tol parasitic.
ViralClassification classify(const InfectionRecord& record, const FitnessFunction& fitness,
                             double tol = 1e-9);

ViralKind classify_delta(double delta_f, double tol);

}  // namespace codon
