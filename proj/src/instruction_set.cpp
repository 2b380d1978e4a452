#include "codon/instruction_set.hpp"

#include <cstdlib>
#include <string>
#include <utility>

#include "codon/errors.hpp"

namespace codon {

namespace {

using Entry = std::pair<const char*, Opcode>;

constexpr Entry kShared[] = {
    {"AAA", Opcode::Start}, {"AUA", Opcode::Stop}, {"AUC", Opcode::Stop},
    {"AUG", Opcode::Stop},  {"UUC", Opcode::Cond}, {"UUA", Opcode::Cond},
    {"GAA", Opcode::Cond},  {"AAU", Opcode::If},
};

constexpr Entry kSet1Only[] = {
    {"CUC", Opcode::BuildFr},   {"GCG", Opcode::BuildTo},    {"AAG", Opcode::CopyAll},
    {"CCC", Opcode::CopyFr},    {"GGG", Opcode::CopyTo},     {"CUU", Opcode::JumpFarFr},
    {"AGA", Opcode::JumpNearFr}, {"CAC", Opcode::JumpTo},    {"GUG", Opcode::JumpTo},
    {"GCU", Opcode::RemFr},     {"UAA", Opcode::RemTo},
};

constexpr Entry kSet2Only[] = {
    {"CCC", Opcode::Copy},
    {"CUU", Opcode::Jump},
};

template <std::size_t N>
void fill(DecodeTable& table, const Entry (&entries)[N]) {
  for (const auto& [text, op] : entries) {
    auto& slot = table[static_cast<std::size_t>(Codon::parse(text).index())];
    if (slot != Opcode::Noop) std::abort();  // a codon may decode to one opcode only
    slot = op;
  }
}

DecodeTable build_table(InstructionSet iset) {
  DecodeTable table;
  table.fill(Opcode::Noop);
  fill(table, kShared);
  if (iset == InstructionSet::Set1) {
    fill(table, kSet1Only);
  } else {
    fill(table, kSet2Only);
  }
  return table;
}

Opcode closer_for(Opcode opener) {
  switch (opener) {
    case Opcode::BuildFr: return Opcode::BuildTo;
    case Opcode::CopyFr: return Opcode::CopyTo;
    case Opcode::RemFr: return Opcode::RemTo;
    default: return Opcode::Noop;
  }
}

}  // namespace

std::string_view to_string(Opcode op) noexcept {
  switch (op) {
    case Opcode::Start: return "START";
    case Opcode::Stop: return "STOP";
    case Opcode::BuildFr: return "BUILD_FR";
    case Opcode::BuildTo: return "BUILD_TO";
    case Opcode::Cond: return "COND";
    case Opcode::If: return "IF";
    case Opcode::CopyAll: return "COPY_ALL";
    case Opcode::CopyFr: return "COPY_FR";
    case Opcode::CopyTo: return "COPY_TO";
    case Opcode::JumpFarFr: return "JUMP_FAR_FR";
    case Opcode::JumpNearFr: return "JUMP_NEAR_FR";
    case Opcode::JumpTo: return "JUMP_TO";
    case Opcode::RemFr: return "REM_FR";
    case Opcode::RemTo: return "REM_TO";
    case Opcode::Copy: return "COPY";
    case Opcode::Jump: return "JUMP";
    case Opcode::Noop: return "NOOP";
  }
  return "NOOP";
}

int numeric_opcode(Opcode op) noexcept {
  switch (op) {
    case Opcode::Start: return 0;
    case Opcode::Copy:
    case Opcode::CopyAll:
    case Opcode::CopyFr:
    case Opcode::CopyTo: return 1;
    case Opcode::Jump:
    case Opcode::JumpFarFr:
    case Opcode::JumpNearFr:
    case Opcode::JumpTo: return 2;
    case Opcode::If: return 3;
    case Opcode::Cond: return 4;
    case Opcode::Stop: return 5;
    default: return 6;
  }
}

std::string_view to_string(InstructionSet iset) noexcept {
  return iset == InstructionSet::Set1 ? "set1" : "set2";
}

InstructionSet parse_instruction_set(std::string_view name) {
  if (name == "set1") return InstructionSet::Set1;
  if (name == "set2") return InstructionSet::Set2;
  throw ContractError("instruction set must be 'set1' or 'set2', got '" +
                      std::string(name) + "'");
}

const DecodeTable& decode_table(InstructionSet iset) noexcept {
  static const DecodeTable set1 = build_table(InstructionSet::Set1);
  static const DecodeTable set2 = build_table(InstructionSet::Set2);
  return iset == InstructionSet::Set1 ? set1 : set2;
}

bool opens_span(Opcode op, InstructionSet iset) noexcept {
  if (iset == InstructionSet::Set2) return op == Opcode::Copy || op == Opcode::Jump;
  switch (op) {
    case Opcode::BuildFr:
    case Opcode::CopyFr:
    case Opcode::RemFr:
    case Opcode::JumpFarFr:
    case Opcode::JumpNearFr: return true;
    default: return false;
  }
}

std::optional<std::size_t> find_conjugate(std::span<const Codon> tape, std::size_t at,
                                          InstructionSet iset) {
  require(at < tape.size(), "find_conjugate: position out of range");
  const Opcode op = decode(tape[at], iset);
  require(opens_span(op, iset), "find_conjugate: codon at position is not a span opener");

  if (iset == InstructionSet::Set2) {
    const std::size_t arg = at + 1;
    if (arg >= tape.size()) return std::nullopt;
    const Codon address = tape[arg];
    if (decode(address, iset) != Opcode::Noop) return std::nullopt;
    for (std::size_t i = arg + 1; i < tape.size(); ++i)
      if (tape[i] == address) return i;
    return std::nullopt;
  }

  if (op == Opcode::JumpFarFr || op == Opcode::JumpNearFr) {
    const bool far = op == Opcode::JumpFarFr;
    std::optional<std::size_t> best;
    std::size_t best_dist = 0;
    for (std::size_t i = 0; i < tape.size(); ++i) {
      if (decode(tape[i], iset) != Opcode::JumpTo) continue;
      const std::size_t dist = i > at ? i - at : at - i;
      // Scanning upward, `>=` / `<=` hands ties to the larger index.
      if (!best || (far ? dist >= best_dist : dist <= best_dist)) {
        best = i;
        best_dist = dist;
      }
    }
    return best;
  }

  const Opcode closer = closer_for(op);
  for (std::size_t i = at + 1; i < tape.size(); ++i)
    if (decode(tape[i], iset) == closer) return i;
  return std::nullopt;
}

}  // namespace codon
